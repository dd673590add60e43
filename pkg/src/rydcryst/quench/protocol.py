"""Switch-off schedule for the storage protocol.

The slowdown is parametrized by x(t) = arcosh(t/tau + C) with
C = (K0^2 + 1)/(2 K0), and everything else follows from the single
profile function

    f(t) = (e^{2 x(t)} - 1) / (e^{2 x(0)} - 1):

the mass grows as m(t) = m0 f(t), the group velocity drops as
v_g(t) = v_g(0)/f(t), and the instantaneous Luttinger parameter is
K(t) = e^{-x(t)}.  This particular profile is the one that makes
Kdot/(u K) constant in time, which is what allows the mode evolution
to be solved in closed form; the constant defines the crossover length

    l0 = pi rho0 tau (1/K0^2 - 1) / m0.

Natural units (hbar = kB = 1) throughout, as in the rest of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ..params import ExperimentalParams, ParameterError
from ..polariton import PolaritonDerived

__all__ = [
    "QuenchProtocol",
    "CrossoverLengths",
    "SwitchTimeBound",
    "protocol_from_params",
    "x_of_t",
    "f_of_t",
    "f_of_t_product_form",
    "instantaneous_k",
    "time_at_k",
    "mass_of_t",
    "vg_of_t",
    "omega_of_t",
    "sound_velocity_of_t",
    "crossover_length",
    "min_switch_time",
    "temperature_cap",
]


@dataclass(frozen=True)
class QuenchProtocol:
    """Frozen description of one switch-off run.

    Attributes
    ----------
    k0 : float
        Initial Luttinger parameter K(0), strictly inside (0, 1).
    tau : float
        Switch-off timescale (s).
    c_const : float
        The profile constant C = (k0^2 + 1)/(2 k0); stored explicitly so a
        serialized protocol is self-describing, validated on construction.
    m0 : float
        Initial polariton mass.
    rho0 : float
        Linear density (1/m).
    vg0 : float
        Initial group velocity (m/s).
    g_sqrt_n, delta_1, gamma : float
        Couplings copied from the optics layer so Omega(t) can be
        reconstructed without carrying the full parameter set around.
    c_light : float
        Vacuum speed of light; needed alongside vg0 in Omega(t).
    """

    k0: float
    tau: float
    c_const: float
    m0: float
    rho0: float
    vg0: float
    g_sqrt_n: float
    delta_1: float
    gamma: float
    c_light: float

    def __post_init__(self) -> None:
        if not 0.0 < self.k0 < 1.0:
            raise ParameterError(
                "k0 must lie strictly between 0 and 1; the schedule "
                "degenerates at k0 = 1 (C = 1, x(0) = 0) and k0 <= 0 is "
                f"unphysical (got {self.k0})"
            )
        for name in ("tau", "m0", "rho0", "vg0", "g_sqrt_n", "gamma", "c_light"):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")
        if self.delta_1 == 0.0:
            raise ParameterError("delta_1 must be nonzero")
        expected_c = (self.k0**2 + 1.0) / (2.0 * self.k0)
        if abs(self.c_const - expected_c) > 1e-12 * expected_c:
            raise ParameterError(
                f"c_const = {self.c_const} is inconsistent with k0 = {self.k0} "
                f"(expected {expected_c})"
            )

    @property
    def x0(self) -> float:
        """Profile coordinate at t = 0; e^{x0} = 1/k0 exactly."""
        return -math.log(self.k0)

    @property
    def l0(self) -> float:
        """Crossover length pi rho0 tau (1/k0^2 - 1)/m0 set by Kdot/(uK) = -2/l0."""
        return math.pi * self.rho0 * self.tau * (1.0 / self.k0**2 - 1.0) / self.m0

    @property
    def u0(self) -> float:
        """Initial sound velocity pi rho0 / (m0 k0)."""
        return math.pi * self.rho0 / (self.m0 * self.k0)

    @property
    def theta0(self) -> float:
        """Initial interaction strength, (1 - k0^2)/(2 k0^2)."""
        return (1.0 - self.k0**2) / (2.0 * self.k0**2)


def protocol_from_params(
    k0: float,
    tau: float,
    derived: PolaritonDerived,
    params: ExperimentalParams,
) -> QuenchProtocol:
    """Assemble a :class:`QuenchProtocol` from the optics layer.

    Parameters
    ----------
    k0 : float
        Target initial Luttinger parameter, 0 < k0 < 1.
    tau : float
        Switch-off timescale (s), positive.
    derived : PolaritonDerived
        Output of ``derive_polariton`` for the same ``params``.
    params : ExperimentalParams
        The experimental parameter set.

    Raises
    ------
    ParameterError
        If k0 is outside (0, 1), tau is not positive, or the polariton is
        massless (free-photon limit), which leaves no mass to grow.
    """
    if tau <= 0.0:
        raise ParameterError(f"tau must be positive, got {tau}")
    if derived.free_photon_limit or derived.m_par <= 0.0:
        raise ParameterError(
            "the switch-off protocol needs a massive dark-state polariton; "
            "these parameters are in the free-photon limit"
        )
    c_const = (k0**2 + 1.0) / (2.0 * k0) if 0.0 < k0 < 1.0 else float("nan")
    if not 0.0 < k0 < 1.0:
        raise ParameterError(
            f"k0 must lie strictly between 0 and 1, got {k0}; "
            "k0 = 1 makes C = 1 and x(0) = 0, so f(t) is undefined"
        )
    return QuenchProtocol(
        k0=k0,
        tau=tau,
        c_const=c_const,
        m0=derived.m_par,
        rho0=params.rho0,
        vg0=derived.vg,
        g_sqrt_n=params.g_sqrt_n,
        delta_1=params.delta_1,
        gamma=params.gamma,
        c_light=params.c,
    )


def x_of_t(protocol: QuenchProtocol, t):
    """Profile coordinate x(t) = arcosh(t/tau + C) for t >= 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ParameterError("the protocol is defined for t >= 0 only")
    return np.arccosh(t / protocol.tau + protocol.c_const)


def f_of_t(protocol: QuenchProtocol, t):
    """Profile function f(t) = (e^{2x(t)} - 1)/(e^{2x(0)} - 1); f(0) = 1.

    Uses expm1 so that k0 close to 1 (tiny x0) stays accurate.
    """
    x = x_of_t(protocol, t)
    return np.expm1(2.0 * x) / np.expm1(2.0 * protocol.x0)


def f_of_t_product_form(protocol: QuenchProtocol, t):
    """The same profile written as e^x sinh(x) e^{-arcosh(C)} / sqrt(C^2 - 1).

    Algebraically identical to :func:`f_of_t` because
    e^x sinh(x) = (e^{2x} - 1)/2 and sqrt(C^2 - 1) = sinh(x0); kept as an
    independent implementation so the two can be cross-checked.
    """
    x = x_of_t(protocol, t)
    c = protocol.c_const
    return np.exp(x) * np.sinh(x) * math.exp(-math.acosh(c)) / math.sqrt(c**2 - 1.0)


def instantaneous_k(protocol: QuenchProtocol, t):
    """Instantaneous Luttinger parameter K(t) = e^{-x(t)}.

    Identical to 1/sqrt(1 + (1/k0^2 - 1) f(t)) because
    1 + (1/k0^2 - 1) f(t) = e^{2x(t)}; the exponential form never
    overflows and is exact at both endpoints (K(0) = k0, K -> 0+).
    """
    return np.exp(-x_of_t(protocol, t))


def time_at_k(protocol: QuenchProtocol, k: float) -> float:
    """Invert K(t): the time at which the protocol reaches K(t) = k.

    Only values 0 < k <= k0 are reachable; t/tau = (1/k + k)/2 - C.
    """
    if not 0.0 < k <= protocol.k0:
        raise ParameterError(
            f"k = {k} is not reached by this protocol (needs 0 < k <= {protocol.k0})"
        )
    return protocol.tau * ((1.0 / k + k) / 2.0 - protocol.c_const)


def mass_of_t(protocol: QuenchProtocol, t):
    """Polariton mass m(t) = m0 f(t)."""
    return protocol.m0 * f_of_t(protocol, t)


def vg_of_t(protocol: QuenchProtocol, t):
    """Group velocity v_g(t) = v_g(0)/f(t); m(t) v_g(t) is constant."""
    return protocol.vg0 / f_of_t(protocol, t)


def omega_of_t(protocol: QuenchProtocol, t):
    """Control-field ramp Omega(t) = g sqrt(n) / sqrt(f(t) c/v_g(0) - 1).

    Strictly decreasing; Omega(0) reproduces the static mixing-angle
    relation Omega^2 = g^2 n / (c/v_g - 1).
    """
    f = f_of_t(protocol, t)
    return protocol.g_sqrt_n / np.sqrt(f * protocol.c_light / protocol.vg0 - 1.0)


def sound_velocity_of_t(protocol: QuenchProtocol, t):
    """Sound velocity u(t) = pi rho0 / (m(t) K(t)).

    The product u(t) K(t) = pi rho0/m(t) is the Galilean-invariant
    combination; with this schedule Kdot/(u K) = -2/l0 at every instant.
    """
    return math.pi * protocol.rho0 / (mass_of_t(protocol, t) * instantaneous_k(protocol, t))


@dataclass(frozen=True)
class CrossoverLengths:
    """Crossover length l0 and its ratios to the medium length.

    ``l0`` is the exact closed form (pi^4/90) c6 rho0^5 tau.  The remaining
    fields are populated only when enough context is supplied to
    :func:`crossover_length`; otherwise they are None.

    ``ratio_paper_form`` is (2 pi / k0) rho0 l_abs |delta_1| / gamma, the
    tau-independent form of l0/L.  It coincides with ``l0_over_medium``
    exactly when tau is chosen so that the pulse's total stopping distance
    integral(v_g dt) = vg0 tau (1 - k0^2)/(2 k0) equals the medium length.

    ``approx_l0`` is OD_c (rho0 a_c)^5 c tau |delta_1|/gamma.  It does not
    reduce to the exact form: the two differ by (delta_1/gamma)^2 * 90/pi^4,
    reported as ``approx_ratio``.
    """

    l0: float
    l0_rho0: float
    l0_over_medium: float | None = None
    ratio_paper_form: float | None = None
    approx_l0: float | None = None
    approx_ratio: float | None = None


def crossover_length(
    c6: float,
    rho0: float,
    tau: float,
    *,
    k0: float | None = None,
    derived: PolaritonDerived | None = None,
    params: ExperimentalParams | None = None,
) -> CrossoverLengths:
    """Crossover length l0 = (pi^4/90) c6 rho0^5 tau and medium-length ratios.

    The mass drops out of l0: with K0 tied to the interaction strength via
    Theta = (pi^3/180) rho0^4 m c6, the protocol-level expression
    pi rho0 tau (1/K0^2 - 1)/m equals (pi^4/90) c6 rho0^5 tau identically.

    Parameters
    ----------
    c6, rho0, tau : float
        van der Waals coefficient, density, and switch-off time; positive.
    k0, derived, params : optional
        When given, the ratio l0/L is evaluated both directly
        (l0 / medium_len) and in the tau-independent form
        (2 pi/k0) rho0 l_abs |delta_1|/gamma, and the approximate
        OD_c-based expression is reported with its discrepancy.
    """
    for name, val in (("c6", c6), ("rho0", rho0), ("tau", tau)):
        if val <= 0.0:
            raise ParameterError(f"{name} must be positive, got {val}")
    l0 = (math.pi**4 / 90.0) * c6 * rho0**5 * tau
    l0_over_medium = None
    ratio_paper = None
    approx_l0 = None
    approx_ratio = None
    if params is not None:
        l0_over_medium = l0 / params.medium_len
    if derived is not None and params is not None:
        abs_delta = abs(params.delta_1)
        approx_l0 = (
            derived.od_c
            * (rho0 * derived.a_c) ** 5
            * params.c
            * tau
            * abs_delta
            / params.gamma
        )
        approx_ratio = approx_l0 / l0
        if k0 is not None:
            if not 0.0 < k0 < 1.0:
                raise ParameterError(f"k0 must lie in (0, 1), got {k0}")
            ratio_paper = (
                (2.0 * math.pi / k0) * rho0 * derived.l_abs * abs_delta / params.gamma
            )
    return CrossoverLengths(
        l0=l0,
        l0_rho0=l0 * rho0,
        l0_over_medium=l0_over_medium,
        ratio_paper_form=ratio_paper,
        approx_l0=approx_l0,
        approx_ratio=approx_ratio,
    )


@dataclass(frozen=True)
class SwitchTimeBound:
    """Minimum switch-off time and the residual bright-state admixture.

    ``tau_min`` satisfies c tau / l_abs = margin * 4 k0^2/(k0^2 - 1)^2.
    ``gamma_theta_integral`` is the numerically evaluated integral of
    gamma_theta(t) = (l_abs/c) * (d theta/dt)^2 over 0 <= t <= tau_min for
    the protocol run at tau = tau_min; it should be well below 1 for the
    storage to stay in the dark state.
    """

    tau_min: float
    margin: float
    k0: float
    gamma_theta_integral: float
    vg_over_c: float


def min_switch_time(
    k0: float,
    l_abs: float,
    c: float,
    *,
    margin: float = 10.0,
    vg_over_c: float = 1e-5,
) -> SwitchTimeBound:
    """Slowest-switching bound tau_min = margin (l_abs/c) 4 k0^2/(k0^2-1)^2.

    Parameters
    ----------
    k0 : float
        Initial Luttinger parameter; the bound diverges as k0 -> 1.
    l_abs : float
        Resonant absorption length (m).
    c : float
        Vacuum speed of light (m/s).
    margin : float, optional
        Safety factor on the boundary value (default 10).
    vg_over_c : float, optional
        Initial slow-light ratio v_g(0)/c entering the mixing angle
        tan^2 theta = f(t) c/v_g(0) - 1; default 1e-5, the slow-light
        operating point of the reference curves.

    Returns
    -------
    SwitchTimeBound
        With the integral of gamma_theta over [0, tau_min] evaluated for
        the protocol run at tau = tau_min.

    Raises
    ------
    ParameterError
        For k0 >= 1 ("protocol requires infinitely slow switching") or
        other out-of-range inputs.
    """
    if k0 >= 1.0:
        raise ParameterError(
            "protocol requires infinitely slow switching: the bound "
            "4 k0^2/(k0^2 - 1)^2 diverges as k0 -> 1"
        )
    if k0 <= 0.0:
        raise ParameterError(f"k0 must be positive, got {k0}")
    for name, val in (("l_abs", l_abs), ("c", c), ("margin", margin)):
        if val <= 0.0:
            raise ParameterError(f"{name} must be positive, got {val}")
    if not 0.0 < vg_over_c < 1.0:
        raise ParameterError(f"vg_over_c must lie in (0, 1), got {vg_over_c}")

    tau_min = margin * (l_abs / c) * 4.0 * k0**2 / (k0**2 - 1.0) ** 2

    # integral of (l_abs/c) theta-dot^2 dt in the x variable:
    # t = tau (cosh x - C) so dt = tau sinh(x) dx and the integrand stays
    # finite at x0 because F(x0) = c/vg0 > 1.
    x0 = -math.log(k0)
    c_const = (k0**2 + 1.0) / (2.0 * k0)
    x_up = math.acosh(1.0 + c_const)
    ratio = 1.0 / vg_over_c
    denom = math.expm1(2.0 * x0)

    def theta_dot_sq_over_xdot(x: float) -> float:
        big_f = ratio * math.expm1(2.0 * x) / denom
        dbig_f = ratio * 2.0 * math.exp(2.0 * x) / denom
        theta_prime = dbig_f / (2.0 * big_f * math.sqrt(big_f - 1.0))
        return theta_prime**2 / math.sinh(x)

    val, _ = quad(theta_dot_sq_over_xdot, x0, x_up, limit=200)
    integral = (l_abs / c) * val / tau_min
    return SwitchTimeBound(
        tau_min=tau_min,
        margin=margin,
        k0=k0,
        gamma_theta_integral=integral,
        vg_over_c=vg_over_c,
    )


def temperature_cap(params: ExperimentalParams) -> float:
    """Upper temperature estimate Omega^2 / (2 |delta_1|).

    Half the maximal polariton band energy omega_max = Omega^2/|delta_1|,
    in the same natural units as the rest of the package (kB = 1).
    """
    return params.omega_c**2 / (2.0 * abs(params.delta_1))
