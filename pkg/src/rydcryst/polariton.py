"""Derived EIT/polariton quantities, dispersion relations, validity audit.

The medium supports a lossless dark-state polariton (DSP) and a lossy
bright-state polariton.  Everything here follows from the three coupled
field/coherence equations; the 3x3 eigenproblem is exact, the quadratic
dark-branch expansion is the second-order perturbative reduction valid in
the slow-light, dispersive regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import ExperimentalParams, ParameterError

__all__ = [
    "PolaritonDerived",
    "DispersionBranches",
    "AuditCondition",
    "ValidityAudit",
    "RegimeError",
    "derive_polariton",
    "dispersion_exact",
    "dispersion_dsp",
    "validity_audit",
]


class RegimeError(ValueError):
    """A requested evaluation point lies outside the model's validity regime."""


@dataclass(frozen=True)
class PolaritonDerived:
    """EIT quantities derived from :class:`ExperimentalParams`.

    tan2_theta = g^2 n / Omega^2 fixes the light/matter composition; the
    group velocity obeys vg = c / (1 + tan2_theta) exactly.  Masses follow
    the dispersive-EIT forms 1/m_par = vg * l_abs * |Delta| / gamma and
    1/m_perp = vg / (2 q_p).  Lengths: a_c = (C6 |Delta| / g^2 n)^(1/6) is
    the minimal separation keeping the interaction shift perturbative,
    a_b = (C6 gamma / Omega^2)^(1/6) the resonant blockade radius.  Optical
    depths: od = L / l_abs, od_c = a_c / l_abs.

    ``free_photon_limit`` tags the degenerate limit where the matter
    fraction underflows (tan2_theta == 0); the fields then hold the
    free-photon values (vg = c, m_par = 0) instead of infinities so that
    downstream arithmetic stays total.
    """

    tan2_theta: float
    vg: float
    l_abs: float
    m_par: float
    m_perp: float
    a_c: float
    a_b: float
    od: float
    od_c: float
    free_photon_limit: bool = False


def derive_polariton(params: ExperimentalParams) -> PolaritonDerived:
    """Compute all derived EIT quantities.  Pure and deterministic.

    Raises :class:`ParameterError` via params validation; params passed in
    are already validated, so this never raises for a constructed instance.
    """
    ratio = params.g_sqrt_n / params.omega_c
    tan2_theta = ratio * ratio
    vg = params.c / (1.0 + tan2_theta)
    g2n = params.g_sqrt_n**2
    abs_delta = abs(params.delta_1)
    a_b = (params.c6 * params.gamma / params.omega_c**2) ** (1.0 / 6.0)
    if g2n == 0.0:
        # Matter fraction underflowed entirely: free photon. l_abs and a_c
        # diverge; their ratio od_c -> 0 like g2n^(5/6), so report the limit
        # values rather than inf/inf.
        return PolaritonDerived(
            tan2_theta=0.0, vg=params.c, l_abs=math.inf, m_par=0.0,
            m_perp=2.0 * params.q_p / params.c, a_c=math.inf, a_b=a_b,
            od=0.0, od_c=0.0, free_photon_limit=True,
        )
    l_abs = params.c * params.gamma / g2n
    # 1/m = vg * l_abs * |Delta| / gamma; m is formed from the equivalent
    # product so that it underflows to 0 (not inf) toward the photon limit.
    m_par = g2n / (vg * params.c * abs_delta)
    m_perp = 2.0 * params.q_p / vg
    a_c = (params.c6 * abs_delta / g2n) ** (1.0 / 6.0)
    od = params.medium_len / l_abs
    od_c = a_c / l_abs
    free = tan2_theta == 0.0 or m_par == 0.0
    if free:
        m_par = 0.0
        vg = params.c
    return PolaritonDerived(
        tan2_theta=tan2_theta,
        vg=vg,
        l_abs=l_abs,
        m_par=m_par,
        m_perp=m_perp,
        a_c=a_c,
        a_b=a_b,
        od=od,
        od_c=od_c,
        free_photon_limit=free,
    )


@dataclass(frozen=True)
class DispersionBranches:
    """Eigenfrequencies of the 3x3 field/coherence problem at one or more k.

    ``frequencies`` has shape (3,) for scalar k or (nk, 3) for array input,
    sorted per k by |imaginary part| ascending (then |real part|), so index
    0 is the dark-state-like branch.  ``degenerate`` flags eigenvalue
    collisions within a relative spacing of 1e-9.
    """

    frequencies: np.ndarray
    degenerate: np.ndarray

    @property
    def dark(self) -> np.ndarray:
        """The dark-state-like branch (index 0 after sorting)."""
        return self.frequencies[..., 0]


def dispersion_exact(params: ExperimentalParams, k) -> DispersionBranches:
    """Exact complex eigenfrequencies of the coupled three-mode problem.

    The (non-Hermitian) matrix is
        [[-k c,      0,        -g sqrt(n)],
         [0,         delta,    -Omega    ],
         [-g sqrt(n), -Omega,  Delta - i gamma]]
    and the three roots of its characteristic cubic are found from the
    companion matrix (exact at this size, branch-stable; no iteration over
    starting guesses).
    """
    k_arr = np.atleast_1d(np.asarray(k, dtype=float))
    g = params.g_sqrt_n
    om = params.omega_c
    dl = params.delta_1
    d2 = params.delta_2
    big_gamma = dl - 1j * params.gamma

    freqs = np.empty((k_arr.size, 3), dtype=complex)
    degenerate = np.zeros(k_arr.size, dtype=bool)
    for i, kv in enumerate(k_arr):
        kc = kv * params.c
        tr = -kc + d2 + big_gamma
        minors = (-kc * d2) + (-kc * big_gamma - g * g) + (d2 * big_gamma - om * om)
        det = -kc * (d2 * big_gamma - om * om) - g * g * d2
        roots = np.roots([-1.0, tr, -minors, det])
        order = np.lexsort((np.abs(roots.real), np.abs(roots.imag)))
        roots = roots[order]
        freqs[i] = roots
        scale = max(1.0, float(np.max(np.abs(roots))))
        gaps = [abs(roots[0] - roots[1]), abs(roots[0] - roots[2]), abs(roots[1] - roots[2])]
        degenerate[i] = min(gaps) < 1e-9 * scale
    if np.isscalar(k) or np.asarray(k).ndim == 0:
        return DispersionBranches(frequencies=freqs[0], degenerate=degenerate[0])
    return DispersionBranches(frequencies=freqs, degenerate=degenerate)


def dispersion_dsp(params: ExperimentalParams, k):
    """Perturbative dark-branch frequency (quadratic order, real).

    omega(k) = delta * (1 + delta * Delta * cos^2(theta) / Omega_e^2)
               - k * vg * (1 - 2 * delta * Delta / Omega_e^2)
               + vg * c * Delta * k^2 / Omega_e^2,

    with the effective coupling Omega_e^2 = g^2 n + Omega^2 (the
    bright-branch splitting that controls the perturbation).  Valid only
    for |k c| << Omega_e^2 / |Delta|; evaluation at |k c| beyond that bound
    raises :class:`RegimeError`.

    The quadratic coefficient is vg * c * Delta / Omega_e^2, i.e. the
    sin^2(theta) ~ 1 form; the exact second-order coefficient carries an
    extra factor sin^2(theta) = g^2 n / Omega_e^2, and the inverse-mass
    convention 1/m_par = vg * l_abs * |Delta| / gamma equals
    2 * g^2 n / Omega_e^2 times this coefficient.
    """
    k_arr = np.asarray(k, dtype=float)
    g2n = params.g_sqrt_n**2
    omega_e2 = g2n + params.omega_c**2
    k_max = omega_e2 / (abs(params.delta_1) * params.c)
    bad = np.abs(k_arr) >= k_max
    if np.any(bad):
        worst = float(np.max(np.abs(k_arr)))
        raise RegimeError(
            f"|k c| >= Omega_e^2/|Delta|: k = {worst:g} 1/m exceeds the "
            f"perturbative bound k_max = {k_max:g} 1/m"
        )
    derived = derive_polariton(params)
    vg = derived.vg
    d2 = params.delta_2
    dl = params.delta_1
    cos2 = 1.0 / (1.0 + derived.tan2_theta)
    offset = d2 * (1.0 + d2 * dl * cos2 / omega_e2)
    drift = vg * (1.0 - 2.0 * d2 * dl / omega_e2)
    curvature = vg * params.c * dl / omega_e2
    omega = offset - k_arr * drift + curvature * k_arr * k_arr
    if np.isscalar(k) or np.asarray(k).ndim == 0:
        return float(omega)
    return omega


@dataclass(frozen=True)
class AuditCondition:
    """One validity condition: ratio against threshold, smaller is safer."""

    name: str
    description: str
    ratio: float
    threshold: float
    passed: bool
    margin: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "ratio": self.ratio,
            "threshold": self.threshold,
            "passed": self.passed,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class ValidityAudit:
    """Report of all model-validity conditions.  Never raises; it reports."""

    conditions: tuple[AuditCondition, ...]
    margin_factor: float = 10.0
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> AuditCondition:
        for cond in self.conditions:
            if cond.name == name:
                return cond
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "all_pass": self.all_pass,
            "margin_factor": self.margin_factor,
            "conditions": [c.to_dict() for c in self.conditions],
            "notes": list(self.notes),
        }


def _condition(name: str, description: str, ratio: float, threshold: float,
               strict: bool = True) -> AuditCondition:
    passed = ratio < threshold if strict else ratio <= threshold * (1.0 + 1e-12)
    margin = threshold / ratio if ratio > 0.0 else math.inf
    return AuditCondition(name=name, description=description, ratio=ratio,
                          threshold=threshold, passed=passed, margin=margin)


def validity_audit(params: ExperimentalParams, l_dsp: float | None = None,
                   margin: float = 10.0) -> ValidityAudit:
    """Audit the perturbative-regime conditions of the polariton model.

    Parameters
    ----------
    params : ExperimentalParams
    l_dsp : float, optional
        Characteristic DSP length scale (m).  Defaults to 1/rho0, the
        interparticle distance relevant for the crystalline state.
    margin : float
        How much smaller than the bound a ratio must be to count as "<<"
        (ratio < 1/margin passes).  The marginal slow-light condition (ii)
        and the separation condition (iv) are plain inequalities and do not
        use the margin.

    Conditions reported (ratio / threshold):
      (i)   two-photon detuning perturbative:  |delta| |Delta| / g^2 n  vs 1/margin
      (ii)  slow-light dispersion:  (l_abs / l_dsp) * (|Delta|/gamma)   vs 1
      (iii) dispersive regime:      gamma / |Delta|                     vs 1/margin
      (iv)  interaction shift perturbative at separation 1/rho0:
            rho0 * a_c                                                  vs 1
      (v)   dilute cutoff (only if a_cut > 0):  rho0 * a_cut            vs 1/margin
    """
    if margin <= 0.0:
        raise ParameterError(f"margin must be strictly positive, got {margin!r}")
    derived = derive_polariton(params)
    if l_dsp is None:
        l_dsp = 1.0 / params.rho0
    g2n = params.g_sqrt_n**2
    abs_delta = abs(params.delta_1)
    small = 1.0 / margin
    notes: list[str] = []

    conditions = [
        _condition(
            "two_photon_perturbative",
            "|delta| << g^2 n / |Delta| (perturbative DSP/BSP coupling)",
            abs(params.delta_2) * abs_delta / g2n,
            small,
        ),
        _condition(
            "slow_light_dispersion",
            "l_abs / l_dsp <= gamma / |Delta| (slow-light dispersion regime)",
            (derived.l_abs / l_dsp) * (abs_delta / params.gamma),
            1.0,
            strict=False,
        ),
        _condition(
            "dispersive_regime",
            "gamma << |Delta| (absorption irrelevant)",
            params.gamma / abs_delta,
            small,
        ),
        _condition(
            "interaction_detuning",
            "interaction shift below g^2 n / |Delta| at separation 1/rho0 "
            "(rho0 * a_c < 1)",
            params.rho0 * derived.a_c,
            1.0,
        ),
    ]
    if params.a_cut > 0.0:
        conditions.append(
            _condition(
                "cutoff_dilute",
                "rho0 * a_cut << 1 (cutoff well below interparticle distance)",
                params.rho0 * params.a_cut,
                small,
            )
        )
    else:
        notes.append("cutoff_dilute not applicable (a_cut = 0)")
    return ValidityAudit(conditions=tuple(conditions), margin_factor=margin,
                         notes=tuple(notes))
