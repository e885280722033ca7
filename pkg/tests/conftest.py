import numpy as np
import pytest

import torus_pusher as tp
from torus_pusher import config, runner


@pytest.fixture(scope="session")
def screw():
    return tp.ScrewField()


@pytest.fixture(scope="session")
def solovev():
    return tp.SolovevField()


@pytest.fixture(scope="session")
def default_cfg():
    return config.parse_config("")


@pytest.fixture(scope="session")
def tokamak_cfg():
    return config.parse_config("field = solovev\n")


@pytest.fixture(scope="session")
def screw_initial(default_cfg, screw):
    """Experiment initial data in every state representation."""
    return {
        kind: runner.initial_state(default_cfg, screw, kind)
        for kind in ("augmented", "slow", "toroidal6", "cartesian")
    }


@pytest.fixture(scope="session")
def reference_eps01(screw, screw_initial):
    """Reference RK4 run of the full system at eps = 0.1, dt = 1e-7,
    sampled every 5e-4 (shared by the order study and the frozen-fixture
    check)."""
    return tp.integrate(
        "rk4", screw_initial["toroidal6"], 0.0, 0.5, 1e-7, 0.1, screw, stride=5000
    )


def random_domain_points(n, rng, r_lo=0.05, r_hi=1.7):
    r = rng.uniform(r_lo, r_hi, n)
    theta = rng.uniform(-np.pi, np.pi, n)
    phi = rng.uniform(-np.pi, np.pi, n)
    return r, theta, phi


def random_slow_states(n, rng, r_lo=0.3, r_hi=1.6):
    states = []
    for _ in range(n):
        states.append(
            tp.SlowState(
                r=rng.uniform(r_lo, r_hi),
                phi=rng.uniform(-np.pi, np.pi),
                theta=rng.uniform(-np.pi, np.pi),
                vpar=rng.uniform(-15.0, 15.0),
                bmu=rng.uniform(0.0, 120.0),
            )
        )
    return states
