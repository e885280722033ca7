"""Command-line experiment runner.

    torus-pusher simulate --config FILE [--scheme S --eps E --dt D --out DIR]
    torus-pusher sweep    --config FILE --out DIR
    torus-pusher fixtures --regenerate [--out FILE]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import parse_config
from .errors import TorusPusherError
from .runner import emit_plot_scripts, run_single, run_sweep

__all__ = ["main"]


def _load_config(path):
    text = Path(path).read_text(encoding="utf-8") if path else ""
    return parse_config(text)


def _cmd_simulate(args):
    cfg = _load_config(args.config)
    if args.reference_dt is not None:
        from dataclasses import replace

        from .config import _validate

        cfg = replace(cfg, reference_dt=args.reference_dt)
        _validate(cfg)
    schemes = [args.scheme] if args.scheme else list(cfg.scheme)
    eps_list = [args.eps] if args.eps is not None else list(cfg.eps)
    dt_list = [args.dt] if args.dt is not None else list(cfg.dt)
    failures = 0
    for scheme in schemes:
        for eps in eps_list:
            for dt in dt_list:
                try:
                    run_single(cfg, scheme, eps, dt, out_dir=args.out)
                    print(f"simulate {scheme} eps={eps:g} dt={dt:g}: done")
                except TorusPusherError as exc:
                    failures += 1
                    print(
                        f"simulate {scheme} eps={eps:g} dt={dt:g}: FAILED: {exc}",
                        file=sys.stderr,
                    )
    return 1 if failures else 0


def _cmd_sweep(args):
    cfg = _load_config(args.config)
    result = run_sweep(cfg, out_dir=args.out)
    emit_plot_scripts(result, args.out)
    for key in sorted(result.reports):
        rep = result.reports[key]
        print(
            f"{key[0]} eps={key[1]:g} dt={key[2]:g}: "
            f"err_ref={rep.err_vs_reference:.6e} "
            f"err_asym={rep.err_vs_asymptotic:.6e}"
        )
    for key in sorted(result.failures):
        print(
            f"{key[0]} eps={key[1]:g} dt={key[2]:g}: FAILED: {result.failures[key]}",
            file=sys.stderr,
        )
    return 0 if result.complete else 1


def _cmd_fixtures(args):
    if not args.regenerate:
        print("fixtures: pass --regenerate to rebuild the oracle values",
              file=sys.stderr)
        return 2
    from . import fixtures

    text = fixtures.main(args.out)
    if not args.out:
        print(text)
    else:
        print(f"fixtures written to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="torus-pusher",
        description="Particle pushers for strongly magnetized plasmas in a torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run single trajectories from a config")
    sim.add_argument("--config", help="config file (omit for all defaults)")
    sim.add_argument("--scheme", help="override: run only this scheme")
    sim.add_argument("--eps", type=float, help="override: single eps")
    sim.add_argument("--dt", type=float, help="override: single dt")
    sim.add_argument("--reference-dt", type=float, dest="reference_dt",
                     help="override the reference time step")
    sim.add_argument("--out", default="out", help="output directory")
    sim.set_defaults(func=_cmd_simulate)

    swp = sub.add_parser("sweep", help="run an (scheme, eps, dt) error sweep")
    swp.add_argument("--config", help="config file (omit for all defaults)")
    swp.add_argument("--out", default="out", help="output directory")
    swp.set_defaults(func=_cmd_sweep)

    fix = sub.add_parser("fixtures", help="rebuild the derived oracle values")
    fix.add_argument("--regenerate", action="store_true",
                     help="actually recompute (slow: high-precision arithmetic)")
    fix.add_argument("--out", help="write JSON here instead of stdout")
    fix.set_defaults(func=_cmd_fixtures)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TorusPusherError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
