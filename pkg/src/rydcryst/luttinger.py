"""Luttinger-liquid description of the interacting polariton gas.

For a 1D gas with density rho0, mass m and van der Waals coupling C6 the
low-energy theory is a Luttinger liquid with parameter K and sound velocity
u.  In the crystalline (strong-coupling) regime both follow in closed form
from the classical phonon dispersion of the 1/r^6 chain; K = 1/2 marks the
boundary where a weak lattice (or the vdW interaction itself acting as its
own lattice through umklapp) pins the gas into a crystal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import ExperimentalParams, ParameterError
from .polariton import derive_polariton

__all__ = [
    "LuttingerParams",
    "SUPERFLUID",
    "CRITICAL",
    "CDW",
    "theta_ll",
    "c6_for_theta",
    "k_closed_form",
    "theta_experimental",
    "od_c_for_theta",
    "correlation_exponents",
    "cdw_regime",
    "pinning_threshold",
    "luttinger_from_params",
]

SUPERFLUID = "SUPERFLUID"
CRITICAL = "CRITICAL"
CDW = "CDW"

# Classical phonon-sum prefactor of the 1/r^6 chain: sum_{j>=1} j^-6 * j^2
# combinations reduce to pi^3/180 in the K integral.
_THETA_PREFACTOR = math.pi**3 / 180.0


@dataclass(frozen=True)
class LuttingerParams:
    """Luttinger parameters of the polariton gas.

    k_param is dimensionless; u_sound carries the unit system of rho0 and
    mass (u = pi * rho0 / (m * K) at hbar = 1).  ``estimator`` records how
    the numbers were obtained ("closed_form" here; lattice estimators label
    their own results).
    """

    k_param: float
    theta_ll: float
    u_sound: float
    rho0: float
    mass: float
    estimator: str = "closed_form"


def theta_ll(rho0: float, mass: float, c6: float) -> float:
    """Dimensionless interaction strength Theta = (pi^3/180) rho0^4 m C6."""
    if rho0 <= 0.0 or mass <= 0.0:
        raise ParameterError("rho0 and mass must be strictly positive")
    if c6 < 0.0:
        raise ParameterError(f"c6 must be non-negative, got {c6!r}")
    return _THETA_PREFACTOR * rho0**4 * mass * c6


def c6_for_theta(theta: float, rho0: float, mass: float) -> float:
    """Invert theta_ll for the vdW coefficient: C6 = Theta/((pi^3/180) rho0^4 m).

    Used to assemble parameter sets that hit a target interaction strength
    (or, through K = 1/sqrt(1+2 Theta), a target Luttinger parameter).
    """
    if theta < 0.0:
        raise ParameterError(f"theta must be non-negative, got {theta!r}")
    if rho0 <= 0.0 or mass <= 0.0:
        raise ParameterError("rho0 and mass must be strictly positive")
    return theta / (_THETA_PREFACTOR * rho0**4 * mass)


def k_closed_form(theta: float) -> float:
    """Luttinger parameter K = 1 / sqrt(1 + 2 Theta) of the vdW chain.

    Interpolates between the free-fermion value K = 1 at Theta = 0 and the
    classical-crystal scaling K ~ 1/sqrt(2 Theta) at strong coupling.
    """
    if theta < 0.0:
        raise ParameterError(f"theta must be non-negative, got {theta!r}")
    return 1.0 / math.sqrt(1.0 + 2.0 * theta)


def theta_experimental(params: ExperimentalParams) -> float:
    """Theta written in measurable ratios:

    Theta = (pi^3/180) (gamma/|Delta|)^2 (rho0 l_abs)^4 (c/vg) OD_c^6.

    Algebraically identical to theta_ll(rho0, m_par, c6); both forms are
    kept so either can serve as a consistency check on the other.
    """
    derived = derive_polariton(params)
    if derived.free_photon_limit:
        return 0.0
    gr = params.gamma / abs(params.delta_1)
    rl = params.rho0 * derived.l_abs
    return _THETA_PREFACTOR * gr**2 * rl**4 * (params.c / derived.vg) * derived.od_c**6


def od_c_for_theta(theta: float, params: ExperimentalParams,
                   mass: float | None = None) -> float:
    """Invert theta_experimental for the critical optical depth OD_c.

    Returns the OD_c = a_c / l_abs a medium with the given gamma, Delta,
    rho0, and vg would need for interaction strength ``theta``.  Only the
    C6-independent factors of ``params`` are used.  ``mass`` defaults to
    the longitudinal polariton mass; passing m_perp gives the transverse
    requirement instead (Theta scales linearly with the mass, so the
    needed OD_c^6 scales with its inverse).
    """
    if theta <= 0.0:
        raise ParameterError(f"theta must be strictly positive, got {theta!r}")
    derived = derive_polariton(params)
    gr = params.gamma / abs(params.delta_1)
    rl = params.rho0 * derived.l_abs
    base = theta / (_THETA_PREFACTOR * gr**2 * rl**4 * (params.c / derived.vg))
    if mass is not None:
        if mass <= 0.0:
            raise ParameterError(f"mass must be strictly positive, got {mass!r}")
        base *= derived.m_par / mass
    return base ** (1.0 / 6.0)


def correlation_exponents(k_param: float) -> tuple[float, float]:
    """Leading power-law exponents (density-wave, superfluid) = (2K, 1/(2K)).

    The density-density correlation decays as z^(-2K) at wavevector
    2 pi rho0 and the phase correlation as z^(-1/(2K)); whichever exponent
    is smaller names the dominant quasi-order.
    """
    if k_param <= 0.0:
        raise ParameterError(f"k_param must be strictly positive, got {k_param!r}")
    return 2.0 * k_param, 1.0 / (2.0 * k_param)


def cdw_regime(k_param: float, tol: float = 1e-9) -> str:
    """Classify K against the pinning boundary K = 1/2.

    Returns SUPERFLUID for K > 1/2, CDW for K < 1/2, CRITICAL within tol.
    """
    if k_param <= 0.0:
        raise ParameterError(f"k_param must be strictly positive, got {k_param!r}")
    if abs(k_param - 0.5) <= tol:
        return CRITICAL
    return SUPERFLUID if k_param > 0.5 else CDW


def pinning_threshold(s: int) -> float:
    """Critical K below which an s-fold commensurate perturbation pins.

    K_s = 2 / s^2: an external lattice with one minimum per particle has
    s = 1 (K_1 = 2), the self-generated crystal channel has s = 2
    (K_2 = 1/2).
    """
    if not isinstance(s, int) or isinstance(s, bool):
        raise ParameterError(f"s must be an integer, got {s!r}")
    if s < 1:
        raise ParameterError(f"s must be a positive integer, got {s!r}")
    return 2.0 / (s * s)


def luttinger_from_params(params: ExperimentalParams) -> LuttingerParams:
    """Closed-form Luttinger parameters for the polariton gas.

    Uses the longitudinal mass from the EIT dispersion and the bare vdW
    coefficient; u follows from uK = pi rho0 / m (hbar = 1).
    """
    derived = derive_polariton(params)
    if derived.free_photon_limit or derived.m_par <= 0.0:
        raise ParameterError(
            "Luttinger description requires a massive polariton "
            "(free-photon limit has m_par = 0)"
        )
    theta = theta_ll(params.rho0, derived.m_par, params.c6)
    k_param = k_closed_form(theta)
    u_sound = math.pi * params.rho0 / (derived.m_par * k_param)
    return LuttingerParams(
        k_param=k_param,
        theta_ll=theta,
        u_sound=u_sound,
        rho0=params.rho0,
        mass=derived.m_par,
        estimator="closed_form",
    )
