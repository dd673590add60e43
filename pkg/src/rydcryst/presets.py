"""Named reference configurations for the command line.

Each preset bundles a fully resolved :class:`ExperimentalParams` set with
the run settings its scenario needs.  All share one slow-light anchor
point (vg/c = 1e-5, rho0 L_abs = gamma/|Delta| = 1/100, ten excitations
over a 5 mm medium) and differ in interaction strength and protocol:

``theta-crit``
    Critical interaction Theta = 3/2, where K = 1/2 exactly; the
    feasibility working point (OD_c along the axis comes out near 20).
``fig2``
    Theta sweep from 0.1 to 30 for the K(Theta) table, plus lattice
    settings (100 sites, 10 particles, dx = 0.1) for spot checks.
``fig3``
    Strongly interacting point Theta = 10 with a softened core
    (a_cut = 1/(5 rho0)) for density-correlation structure.
``fig4``
    Storage-quench protocol from K0 = 0.8 with crossover length
    l0 rho0 = 100 and initial thermal length L_T0 rho0 = 10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .luttinger import c6_for_theta, k_closed_form
from .params import ExperimentalParams, ParameterError
from .polariton import derive_polariton
from .quench import crossover_length, protocol_from_params
from .units import C_LIGHT

__all__ = ["Preset", "PRESET_NAMES", "get_preset", "slow_light_anchor"]

PRESET_NAMES = ("theta-crit", "fig2", "fig3", "fig4")

_COMMON_SETTINGS = {
    # lattice discretization and solver knobs
    "n_sites": 100,
    "dx": 0.1,
    "n_max": 3,
    "chi_max": 32,
    "e_tol": 1e-8,
    "method": "auto",
    "boundary": "open",
    # closed-form sweep grid
    "theta_min": 0.1,
    "theta_max": 30.0,
    "theta_points": 61,
    # switching-bound safety factor
    "margin": 10.0,
}


@dataclass(frozen=True)
class Preset:
    """A named, fully resolved input configuration."""

    name: str
    description: str
    params: ExperimentalParams
    settings: dict = field(default_factory=dict)


def slow_light_anchor(theta: float, *, vg_over_c: float = 1e-5,
                      gamma: float = 2.0 * math.pi * 3e6,
                      detuning_over_gamma: float = 100.0,
                      l_abs: float = 5e-6, rho0: float = 2000.0,
                      medium_len: float = 5e-3, a_cut: float = 0.0,
                      temperature: float = 0.0) -> ExperimentalParams:
    """Slow-light parameter set with a prescribed interaction strength.

    Works backwards from (vg/c, l_abs, Theta) to (g sqrt n, Omega, C6).
    The C6 value is fixed last, through the longitudinal mass of the
    interaction-free set, so that theta_ll reproduces ``theta`` exactly.
    """
    if not 0.0 < vg_over_c < 1.0:
        raise ParameterError(f"vg_over_c must lie in (0, 1), got {vg_over_c!r}")
    g2n = C_LIGHT * gamma / l_abs
    base = ExperimentalParams(
        g_sqrt_n=math.sqrt(g2n),
        gamma=gamma,
        delta_1=detuning_over_gamma * gamma,
        omega_c=math.sqrt(g2n * vg_over_c / (1.0 - vg_over_c)),
        q_p=2.0 * math.pi / 780e-9,
        rho0=rho0,
        medium_len=medium_len,
        a_cut=a_cut,
        temperature=temperature,
    )
    if theta == 0.0:
        return base
    c6 = c6_for_theta(theta, rho0, derive_polariton(base).m_par)
    return base.replace(c6=c6)


def _theta_crit() -> Preset:
    params = slow_light_anchor(1.5)
    settings = dict(_COMMON_SETTINGS)
    settings.update(theta_target=1.5, k0=k_closed_form(1.5))
    return Preset(
        name="theta-crit",
        description="critical point Theta = 3/2 (K = 1/2); feasibility anchor",
        params=params,
        settings=settings,
    )


def _fig2() -> Preset:
    params = slow_light_anchor(1.5)
    settings = dict(_COMMON_SETTINGS)
    return Preset(
        name="fig2",
        description="K(Theta) sweep, Theta in [0.1, 30], with lattice spot checks",
        params=params,
        settings=settings,
    )


def _fig3() -> Preset:
    rho0 = 2000.0
    params = slow_light_anchor(10.0, rho0=rho0, a_cut=1.0 / (5.0 * rho0))
    settings = dict(_COMMON_SETTINGS)
    return Preset(
        name="fig3",
        description="deep-crystal point Theta = 10 with softened core a_cut = 1/(5 rho0)",
        params=params,
        settings=settings,
    )


def _fig4() -> Preset:
    k0 = 0.8
    l0_rho0 = 100.0
    l_t0_rho0 = 10.0
    k_final = 5e-5
    theta0 = (1.0 / k0**2 - 1.0) / 2.0
    params = slow_light_anchor(theta0)
    derived = derive_polariton(params)
    # l0 is linear in tau, so one reference evaluation fixes the scale
    l0_per_tau = crossover_length(params.c6, params.rho0, 1.0).l0
    tau = (l0_rho0 / params.rho0) / l0_per_tau
    protocol = protocol_from_params(k0, tau, derived, params)
    params = params.replace(temperature=protocol.u0 * params.rho0 / l_t0_rho0)
    settings = dict(_COMMON_SETTINGS)
    settings.update(
        k0=k0,
        tau=tau,
        k_final=k_final,
        l0_rho0=l0_rho0,
        l_t0_rho0=l_t0_rho0,
        z_min_rho0=1.0,
        z_max_rho0=4000.0,
        z_points=400,
        thermal_z_max_rho0=400.0,
        protocol_samples=200,
    )
    return Preset(
        name="fig4",
        description="storage quench from K0 = 0.8: l0 rho0 = 100, L_T0 rho0 = 10",
        params=params,
        settings=settings,
    )


_BUILDERS = {
    "theta-crit": _theta_crit,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
}


def get_preset(name: str) -> Preset:
    """Look up a preset by name; raises ParameterError for unknown names."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        known = ", ".join(PRESET_NAMES)
        raise ParameterError(f"unknown preset {name!r}; known presets: {known}") from None
    return builder()
