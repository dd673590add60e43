import math

import pytest

from rydcryst import ExperimentalParams

C = 299792458.0


def slow_light_params(theta=1.5, vg_over_c=1e-5, gamma=2 * math.pi * 3e6,
                      detuning_over_gamma=100.0, l_abs=5e-6, rho0=2000.0,
                      medium_len=5e-3, **extra):
    """Build a slow-light parameter set with a prescribed Theta.

    Works backwards from (vg/c, l_abs, Theta) to (g sqrt n, Omega, C6); the
    defaults reproduce the critical-point working example used throughout
    the tests.
    """
    delta = detuning_over_gamma * gamma
    g2n = C * gamma / l_abs
    omega = math.sqrt(g2n * vg_over_c / (1.0 - vg_over_c))
    m_par = g2n / ((C * vg_over_c) * C * delta)
    c6 = theta / (math.pi**3 / 180.0 * rho0**4 * m_par)
    kwargs = dict(
        g_sqrt_n=math.sqrt(g2n),
        gamma=gamma,
        delta_1=delta,
        omega_c=omega,
        q_p=2 * math.pi / 780e-9,
        rho0=rho0,
        medium_len=medium_len,
        c6=c6,
    )
    kwargs.update(extra)
    return ExperimentalParams(**kwargs)


@pytest.fixture
def critical_params():
    """Working point at Theta = 3/2, i.e. exactly K = 1/2."""
    return slow_light_params()
