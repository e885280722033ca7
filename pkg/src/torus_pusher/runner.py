"""Config-driven experiment runner: single runs, sweeps, plot scripts.

Sweep cells are independent (scheme, eps, dt) runs and execute on a
thread pool sized by TORUS_PUSHER_THREADS (default: logical cores); the
stepping kernels release the GIL.  Output rows are sorted, never
arrival-ordered, so identical configs give byte-identical CSVs.
"""

from __future__ import annotations

import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .diagnostics import (
    ErrorReport,
    augmented_view,
    invariant_series,
    linf_position_error,
)
from .dynamics import AugmentedState, FastState, SlowState
from .errors import MissingData, TorusPusherError
from .fields import FieldModel, ScrewField, ScrewFieldParams, SolovevField, SolovevFieldParams
from .geometry import TorusParams, ToroidalPoint, coordinate_frame, toroidal_to_cartesian
from .integrators import Trajectory, integrate

__all__ = [
    "SweepResult",
    "build_field_model",
    "initial_state",
    "run_single",
    "run_sweep",
    "emit_plot_scripts",
    "worker_count",
    "fmt17",
]

TRAJ_HEADER = "t,r,theta,phi,vpar,bmu,u_r,u_perp,x,y,z,energy,mu"
INVARIANT_HEADER = "t,energy,kinetic,bmu,mu,r"
SWEEP_HEADER = "scheme,eps,dt,err_vs_reference,err_vs_asymptotic"


def fmt17(x: float) -> str:
    """17 significant digits: enough for exact float64 round-trips."""
    return format(float(x), ".17g")


def _tag(x: float) -> str:
    return format(float(x), "g")


def worker_count() -> int:
    env = os.environ.get("TORUS_PUSHER_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def build_field_model(cfg: ExperimentConfig) -> FieldModel:
    torus = TorusParams(cfg.R0)
    if cfg.field == "screw":
        return ScrewField(
            ScrewFieldParams(cfg.B0, cfg.B1), torus, cfg.r_min, cfg.r_margin
        )
    return SolovevField(
        SolovevFieldParams(cfg.B0, cfg.psi_scale, cfg.potential_scale),
        torus, cfg.r_min, cfg.r_margin,
    )


def initial_state(cfg: ExperimentConfig, fm: FieldModel, kind: str):
    """Initial data in the representation a scheme kind expects."""
    p0 = ToroidalPoint(cfg.r0, cfg.theta0, cfg.phi0)
    x0 = toroidal_to_cartesian(p0, fm.torus)
    frame = coordinate_frame(cfg.theta0, cfg.phi0)
    v = np.asarray(cfg.v0, dtype=float)
    if cfg.initial_velocity_frame == "cartesian":
        v_cart = v
        v_r, v_th, v_ph = (float(v @ e) for e in (frame.e1, frame.e2, frame.e3))
    else:  # rtp: components along (e_r, e_theta, e_phi)
        v_r, v_th, v_ph = (float(c) for c in v)
        v_cart = v_r * frame.e1 + v_th * frame.e2 + v_ph * frame.e3

    if kind == "cartesian":
        return np.array([x0.x, x0.y, x0.z, *v_cart])
    if kind == "toroidal6":
        return np.array([cfg.r0, cfg.theta0, cfg.phi0, v_r, v_th, v_ph])

    omega = float(fm.magnetic(cfg.r0, cfg.theta0)[1])
    b = float(fm.magnetic(cfg.r0, cfg.theta0)[0])
    vpar = math.cos(omega) * v_ph + math.sin(omega) * v_th
    vperp = math.sin(omega) * v_ph - math.cos(omega) * v_th
    bmu = (v_r * v_r + vperp * vperp) / 2.0
    slow = SlowState(cfg.r0, cfg.phi0, cfg.theta0, vpar, bmu)
    if kind == "slow":
        return slow
    return AugmentedState(slow, FastState(v_r / b, vperp / b))


def _state_kind(scheme: str) -> str:
    from .integrators import SCHEMES

    return SCHEMES[scheme][0]


def run_single(cfg: ExperimentConfig, scheme: str, eps: float, dt: float,
               out_dir=None):
    """One trajectory plus its invariant series; optionally written as CSV."""
    fm = build_field_model(cfg)
    initial = initial_state(cfg, fm, _state_kind(scheme))
    traj = integrate(
        scheme, initial, 0.0, cfg.tfinal, dt, eps, fm, stride=cfg.stride,
        boris_staggered=cfg.boris_staggered,
    )
    series = invariant_series(traj, fm)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        suffix = f"{scheme}_{_tag(eps)}_{_tag(dt)}"
        _write_traj_csv(out_dir / f"traj_{suffix}.csv", traj, fm, series)
        _write_invariants_csv(out_dir / f"invariants_{suffix}.csv", series)
    return traj, series


def _write_traj_csv(path: Path, traj: Trajectory, fm: FieldModel, series):
    view = augmented_view(traj, fm)
    pos = traj.positions()
    cols = [
        traj.times, view["r"], view["theta"], view["phi"], view["vpar"],
        view["bmu"], view["u_r"], view["u_perp"],
        pos[:, 0], pos[:, 1], pos[:, 2],
        series["energy"].values, series["mu"].values,
    ]
    _write_csv(path, TRAJ_HEADER, cols)


def _write_invariants_csv(path: Path, series):
    s = series
    cols = [
        s["energy"].times, s["energy"].values, s["kinetic"].values,
        s["bmu"].values, s["mu"].values, s["r"].values,
    ]
    _write_csv(path, INVARIANT_HEADER, cols)


def _write_csv(path: Path, header: str, cols):
    rows = zip(*cols)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(fmt17(v) for v in row) + "\n")


@dataclass
class SweepResult:
    """Error reports per (scheme, eps, dt) cell plus per-cell failures."""

    reports: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return not self.failures

    def sorted_keys(self):
        return sorted(self.reports) + sorted(self.failures)


def _gcd_stride(dts, fine_dt):
    mult = [round(dt / fine_dt) for dt in dts]
    g = 0
    for m in mult:
        g = math.gcd(g, m)
    return max(g, 1)


def run_sweep(cfg: ExperimentConfig, out_dir=None) -> SweepResult:
    """Errors of every (scheme, eps, dt) cell against two references.

    Per eps: one RK4 reference of the full system at reference_dt, and
    one effective-model reference integrated with limit2_eff at
    asymptotic_dt.  Coarse grids nest in both reference grids, so the
    discrete max-norms involve no interpolation.
    """
    from .errors import ValidationError

    if cfg.tfinal / cfg.reference_dt > cfg.step_budget:
        raise ValidationError(
            f"reference run needs {cfg.tfinal / cfg.reference_dt:.3g} steps, "
            f"over the budget {cfg.step_budget}"
        )
    fm = build_field_model(cfg)
    ref_stride = _gcd_stride(cfg.dt, cfg.reference_dt)
    asym_stride = _gcd_stride(cfg.dt, cfg.asymptotic_dt)
    tor6_init = initial_state(cfg, fm, "toroidal6")
    slow_init = initial_state(cfg, fm, "slow")

    workers = worker_count()

    def make_refs(eps):
        try:
            ref = integrate(
                "rk4", tor6_init, 0.0, cfg.tfinal, cfg.reference_dt, eps, fm,
                stride=ref_stride,
            )
            asym = integrate(
                "limit2_eff", slow_init, 0.0, cfg.tfinal, cfg.asymptotic_dt, eps,
                fm, stride=asym_stride,
            )
        except TorusPusherError as exc:
            return eps, exc
        return eps, (ref, asym)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        refs = dict(pool.map(make_refs, cfg.eps))

    cells = [
        (scheme, eps, dt)
        for scheme in cfg.scheme for eps in cfg.eps for dt in cfg.dt
    ]

    def run_cell(key):
        scheme, eps, dt = key
        if isinstance(refs[eps], TorusPusherError):
            raise TorusPusherError(f"reference run failed: {refs[eps]}")
        initial = initial_state(cfg, fm, _state_kind(scheme))
        traj = integrate(
            scheme, initial, 0.0, cfg.tfinal, dt, eps, fm, stride=1,
            boris_staggered=cfg.boris_staggered,
        )
        ref, asym = refs[eps]
        series = invariant_series(traj, fm)
        drift = {name: s.max_relative_drift() for name, s in series.items()}
        return ErrorReport(
            scheme=scheme, eps=eps, dt=dt,
            err_vs_reference=linf_position_error(traj, ref),
            err_vs_asymptotic=linf_position_error(traj, asym),
            invariant_drift=drift,
        )

    result = SweepResult()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(run_cell, key): key for key in cells}
        for fut, key in futures.items():
            try:
                result.reports[key] = fut.result()
            except TorusPusherError as exc:
                result.failures[key] = str(exc)

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_sweep_csv(out_dir / "sweep_errors.csv", result)
    return result


def _write_sweep_csv(path: Path, result: SweepResult):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for key in sorted(set(result.reports) | set(result.failures)):
            scheme, eps, dt = key
            rep = result.reports.get(key)
            if rep is None:
                fh.write(f"{scheme},{fmt17(eps)},{fmt17(dt)},nan,nan\n")
            else:
                fh.write(
                    f"{scheme},{fmt17(eps)},{fmt17(dt)},"
                    f"{fmt17(rep.err_vs_reference)},{fmt17(rep.err_vs_asymptotic)}\n"
                )


def emit_plot_scripts(result: SweepResult, outdir) -> list:
    """Figure-style gnuplot scripts for a sweep: one per error panel.

    Writes one data file per (scheme, eps) curve and two scripts
    plotting error against dt on log-log axes.  Deterministic output.
    """
    outdir = Path(outdir)
    if not (outdir / "sweep_errors.csv").exists():
        raise MissingData(f"no sweep_errors.csv under {outdir}")
    if not result.reports:
        print("emit_plot_scripts: empty sweep, nothing to plot", file=sys.stderr)
        return []

    curves = {}
    for (scheme, eps, dt), rep in sorted(result.reports.items()):
        curves.setdefault((scheme, eps), []).append(rep)

    written = []
    for (scheme, eps), reps in sorted(curves.items()):
        data = outdir / f"curve_{scheme}_eps{_tag(eps)}.dat"
        with open(data, "w", encoding="utf-8") as fh:
            fh.write("# dt err_vs_reference err_vs_asymptotic\n")
            for rep in sorted(reps, key=lambda r: r.dt):
                fh.write(
                    f"{fmt17(rep.dt)} {fmt17(rep.err_vs_reference)} "
                    f"{fmt17(rep.err_vs_asymptotic)}\n"
                )
        written.append(data)

    panels = [
        ("plot_error_vs_reference.gp", 2, "error vs reference solution"),
        ("plot_error_vs_asymptotic.gp", 3, "error vs asymptotic model"),
    ]
    for name, column, title in panels:
        script = outdir / name
        lines = [
            "set logscale xy",
            'set xlabel "dt"',
            'set ylabel "L^inf position error"',
            f'set title "{title}"',
            "set key outside",
        ]
        plots = [
            f'"curve_{scheme}_eps{_tag(eps)}.dat" using 1:{column} '
            f'with linespoints title "{scheme} eps={_tag(eps)}"'
            for (scheme, eps) in sorted(curves)
        ]
        lines.append("plot \\\n    " + ", \\\n    ".join(plots))
        script.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(script)
    return written
