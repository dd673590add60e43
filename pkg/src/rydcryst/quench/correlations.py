"""Post-quench correlation envelopes.

The phase variance across the switch-off is

    <[phi(z) - phi(0)]^2> = K(t) [ ln(z/alpha) + I(z, t) ],

so the oscillatory density-correlation envelope is
(alpha/z)^{2K(t)} exp(-2 K(t) I(z,t)), normalized to 1 at z = alpha.
The momentum integral

    I(z, t) = int_0^inf dp/p e^{-alpha p} (1 - cos pz) Phi(p, t)

has the closed-form excess spectrum

    Phi = [cosh(s r) - 1 + s sinh(s r)] / s^2,
    s^2 = 1 - l0^2 p^2,   r = ln(K0 / K(t)),

evaluated as a unified complex expression (for l0 p > 1 the root is
imaginary and cosh/sinh turn into cos/sin), with an explicit series inside
|l0^2 p^2 - 1| < 1e-4 where the direct form degenerates to 0/0.  Phi -> K0/K - 1
as p -> 0 (sudden modes) and decays ~ sin/(l0 p) for l0 p >> 1 (adiabatic
modes), which is what produces the slope crossover -2K(t) -> -2K0 at z ~ l0.

Finite temperature inserts the initial-mode Bose factor, i.e. multiplies
the mode variance by coth(u0 p / 2T); the 1/p divergence this adds at small
momentum is removed analytically with the exact reference integrals

    int dp/p   e^{-ap}(1 - cos pz) = ln(1 + z^2/a^2)/2
    int dp/p^2 e^{-ap}(1 - cos pz) = z arctan(z/a) - (a/2) ln(1 + z^2/a^2),

and the ln(z/alpha) term is never computed numerically.  The remaining
regular integrand is integrated on a composite Gauss-Legendre grid whose
panel widths track the local phase rate (the sqrt(l0^2 p^2 - 1)-oscillation
of Phi plus the cos(pz) rate), with the smooth part of the tail closed
analytically via exponential integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import exp1

from ..curves import CorrelationCurve
from ..params import ParameterError
from .protocol import QuenchProtocol, instantaneous_k

__all__ = [
    "correlation_final_zero_t",
    "correlation_thermal",
    "phi_excess",
    "log_log_slope",
    "slope_crossover_location",
    "gaussian_exponential_crossover",
]

# hard momentum cutoff: beyond this e^{-alpha p} < 1e-16
_P_ALPHA_MAX = 36.84
_SERIES_WINDOW = 1e-4
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def phi_excess(r_tilde: float, l0: float, p):
    """Excess mode variance Phi(p) relative to the instantaneous ground state.

    Parameters
    ----------
    r_tilde : float
        ln(K0 / K(t)) >= 0.
    l0 : float
        Crossover length of the protocol.
    p : array_like
        Momenta, >= 0 allowed (Phi(0) = e^r - 1).

    Notes
    -----
    Unified complex evaluation of
    [cosh(s r) - 1 + s sinh(s r)]/s^2 with s = sqrt(1 - l0^2 p^2); inside
    |s^2| < 1e-4 a series in s^2 is used instead:  (r + r^2/2)
    + s^2 (r^3/6 + r^4/24) + s^4 (r^5/120 + r^6/720).
    """
    p = np.asarray(p, dtype=float)
    if r_tilde < 0.0:
        raise ParameterError(f"r_tilde must be >= 0, got {r_tilde}")
    s2 = 1.0 - (l0 * p) ** 2
    small = np.abs(s2) < _SERIES_WINDOW
    s2_safe = np.where(small, 1.0, s2)
    s = np.sqrt(s2_safe.astype(complex))
    direct = ((np.cosh(s * r_tilde) - 1.0) + s * np.sinh(s * r_tilde)) / s2_safe
    r = r_tilde
    series = (
        (r + r**2 / 2.0)
        + s2 * (r**3 / 6.0 + r**4 / 24.0)
        + s2**2 * (r**5 / 120.0 + r**6 / 720.0)
    )
    return np.where(small, series, direct.real)


def _cothm(y):
    """coth(y) - 1/y, stable for small and large arguments."""
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    small = y < 0.05
    large = y > 20.0
    mid = ~(small | large)
    ys = y[small]
    out[small] = ys / 3.0 - ys**3 / 45.0 + 2.0 * ys**5 / 945.0
    ym = y[mid]
    out[mid] = np.cosh(ym) / np.sinh(ym) - 1.0 / ym
    yl = y[large]
    out[large] = 1.0 - 1.0 / yl + 2.0 * np.exp(-2.0 * yl)
    return out


def _refine_edges(edges: np.ndarray, max_width: float) -> np.ndarray:
    """Subdivide panels wider than max_width (uniformly per panel)."""
    out = [edges[:1]]
    for left, right in zip(edges[:-1], edges[1:]):
        width = right - left
        if width > max_width:
            n = int(math.ceil(width / max_width))
            out.append(np.linspace(left, right, n + 1)[1:])
        else:
            out.append(np.asarray([right]))
    return np.concatenate(out)


def _quadrature_grid(l0: float, r_tilde: float, alpha: float, z_max: float):
    """Composite Gauss-Legendre nodes/weights for the p-integral.

    Three regions: [0, 1/l0] resolves the small-p knee of Phi (width
    1/(l0 sqrt(r)) for large r); a sigma-spaced band just past 1/l0 where
    the oscillation phase sqrt(l0^2 p^2 - 1) r has a square-root edge; and
    a marched tail where panel widths follow the combined local phase rate
    of the Phi oscillation and cos(p z_max).  Returns nodes, weights and
    the cut momentum p_cut beyond which the smooth tail is closed
    analytically.
    """
    r_eff = max(r_tilde, 1.0)
    p_star = 1.0 / l0
    rate_z = z_max + alpha

    # knee region
    knee = 1.0 / (l0 * math.sqrt(r_eff))
    panel_a = min(knee / 3.0, (math.pi / 4.0) / rate_z, p_star / 24.0)
    edges_a = np.linspace(0.0, p_star, int(math.ceil(p_star / panel_a)) + 1)

    # square-root band: equal steps in sigma = sqrt(l0^2 p^2 - 1) up to 5
    d_sigma = (math.pi / 3.0) / r_eff
    sigma1 = np.linspace(0.0, 5.0, int(math.ceil(5.0 / d_sigma)) + 1)
    edges_b = np.sqrt(sigma1[1:] ** 2 + 1.0) / l0
    edges_b = _refine_edges(
        np.concatenate(([p_star], edges_b)), (math.pi / 4.0) / rate_z
    )[1:]

    # tail cut: oscillatory remainder envelope ~ 2 e^{-alpha p}/sigma^2
    # below 1e-13 of the small-p scale, capped by the hard e^{-alpha p} cutoff
    scale = max(1.0, math.expm1(r_tilde))
    sigma_cut = 20.0
    sigma_hard = _P_ALPHA_MAX * l0 / alpha
    while (
        2.0 * math.exp(-alpha * math.sqrt(sigma_cut**2 + 1.0) / l0) / sigma_cut**2
        > 1e-13 * scale
        and sigma_cut < sigma_hard
    ):
        sigma_cut *= 1.3
    sigma_cut = min(sigma_cut, sigma_hard)
    p_cut = math.sqrt(sigma_cut**2 + 1.0) / l0

    # marched tail: step = (pi/2) / (phase rate of Phi + rate of cos(pz))
    edges_c = []
    p = edges_b[-1]
    while p < p_cut:
        sigma = math.sqrt(max((l0 * p) ** 2 - 1.0, 1e-300))
        rate = r_tilde * l0 * l0 * p / sigma + rate_z
        p = min(p + (math.pi / 2.0) / rate, p_cut)
        edges_c.append(p)

    edges = np.concatenate((edges_a, edges_b, np.asarray(edges_c)))
    centers = 0.5 * (edges[1:] + edges[:-1])
    halves = 0.5 * (edges[1:] - edges[:-1])
    nodes = (centers[:, None] + halves[:, None] * _GL_NODES[None, :]).ravel()
    weights = (halves[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return nodes, weights, p_cut


def _ref_log(z, alpha):
    """Exact int_0^inf dp/p e^{-alpha p}(1 - cos pz) = ln(1 + z^2/a^2)/2."""
    return 0.5 * np.log1p((z / alpha) ** 2)


def _ref_inv_square(z, alpha):
    """Exact int_0^inf dp/p^2 e^{-alpha p}(1 - cos pz)."""
    return z * np.arctan(z / alpha) - 0.5 * alpha * np.log1p((z / alpha) ** 2)


def _tail_one(p_cut, alpha, z):
    """int_{p_cut}^inf dp/p e^{-alpha p} (1 - cos pz) via exponential integrals."""
    beta = alpha + 1j * z
    return np.real(exp1(alpha * p_cut) - exp1(beta * p_cut))


def _tail_inv_square(p_cut, alpha, z):
    """int_{p_cut}^inf dp/p^2 e^{-alpha p} (1 - cos pz)."""
    beta = alpha + 1j * np.asarray(z, dtype=complex)
    real_part = math.exp(-alpha * p_cut) / p_cut - alpha * exp1(alpha * p_cut)
    osc = np.exp(-beta * p_cut) / p_cut - beta * exp1(beta * p_cut)
    return real_part - np.real(osc)


def _cosine_sums(w: np.ndarray, p: np.ndarray, z: np.ndarray) -> np.ndarray:
    """sum_i w_i cos(p_i z_j), chunked over z to bound memory."""
    out = np.empty(z.size)
    step = max(1, int(4e6 // max(p.size, 1)))
    for lo in range(0, z.size, step):
        hi = min(lo + step, z.size)
        out[lo:hi] = w @ np.cos(p[:, None] * z[None, lo:hi])
    return out


def _i_of_z(protocol, r_tilde, z, alpha, temperature):
    """I(z) (or its thermal counterpart) on an array of z, plus diagnostics."""
    l0 = protocol.l0
    k0 = protocol.k0
    c0 = math.expm1(r_tilde)
    z = np.asarray(z, dtype=float)

    if temperature is None and r_tilde == 0.0:
        return np.zeros_like(z), {"n_nodes": 0, "p_cut": 0.0}

    p, wts, p_cut = _quadrature_grid(l0, r_tilde, alpha, float(np.max(z)))
    phi = phi_excess(r_tilde, l0, p)
    damp = np.exp(-alpha * p) / p

    if temperature is None:
        weight = wts * damp * (phi - c0)
        base = c0 * _ref_log(z, alpha)
        tail = -c0 * _tail_one(p_cut, alpha, z)
    else:
        l_t0 = protocol.u0 / temperature
        c2 = 2.0 * (1.0 + c0) / l_t0
        y = 0.5 * p * l_t0
        # (1+Phi) coth(y) - c2/p, rearranged so nothing cancels at p -> 0
        regular = 2.0 * (phi - c0) / (p * l_t0) + (1.0 + phi) * _cothm(y)
        weight = wts * damp * regular
        base = c2 * _ref_inv_square(z, alpha) - _ref_log(z, alpha)
        tail = _tail_one(p_cut, alpha, z) - c2 * _tail_inv_square(p_cut, alpha, z)

    total = float(np.sum(weight))
    integral = base + (total - _cosine_sums(weight, p, z)) + tail
    info = {"n_nodes": int(p.size), "p_cut": float(p_cut)}
    return integral, info


def _regime_tags(z, l0):
    tags = []
    for zv in z:
        if zv < l0 / math.e:
            tags.append("adiabatic")
        elif zv > l0 * math.e:
            tags.append("diabatic")
        else:
            tags.append("crossover")
    return tags


def _validate_grid(z_grid, alpha):
    z = np.asarray(z_grid, dtype=float)
    if z.ndim != 1 or z.size < 2:
        raise ParameterError("z_grid must be a 1D array with at least two points")
    if np.any(np.diff(z) <= 0.0):
        raise ParameterError("z_grid must be strictly increasing")
    if z[0] < alpha:
        raise ParameterError(
            f"z_grid must start at or above the cutoff alpha = {alpha}"
        )
    return z


def correlation_final_zero_t(
    protocol: QuenchProtocol,
    t: float,
    z_grid,
    alpha: float | None = None,
) -> CorrelationCurve:
    """Zero-temperature envelope of the oscillatory density correlations.

    Parameters
    ----------
    protocol : QuenchProtocol
    t : float
        Evolution time at which the envelope is evaluated.
    z_grid : array_like
        Strictly increasing separations, all >= alpha.
    alpha : float, optional
        Short-distance cutoff; defaults to 1/rho0.

    Returns
    -------
    CorrelationCurve
        amplitude = (alpha/z)^{2K(t)} exp(-2 K(t) [I(z) - I(alpha)]),
        normalized to 1 at z = alpha.  The log-log slope is ~ -2K(t) for
        alpha << z << l0 and crosses over to ~ -2K0 for z >> l0.
    """
    if alpha is None:
        alpha = 1.0 / protocol.rho0
    z = _validate_grid(z_grid, alpha)
    k_t = float(instantaneous_k(protocol, t))
    # K(0) can exceed k0 by an ulp through the arccosh roundtrip
    r_tilde = max(0.0, math.log(protocol.k0 / k_t))

    integral, info = _i_of_z(protocol, r_tilde, z, alpha, None)
    i_alpha, _ = _i_of_z(protocol, r_tilde, np.asarray([alpha]), alpha, None)
    i_alpha = float(i_alpha[0])
    log_env = -2.0 * k_t * (np.log(z / alpha) + integral - i_alpha)
    amplitude = np.exp(log_env)

    crossover = slope_crossover_location(z, amplitude, -2.0 * k_t, -2.0 * protocol.k0)
    metadata = {
        "kind": "zero_temperature",
        "k0": protocol.k0,
        "k_t": k_t,
        "t": float(t),
        "tau": protocol.tau,
        "l0": protocol.l0,
        "l0_rho0": protocol.l0 * protocol.rho0,
        "rho0": protocol.rho0,
        "alpha_cutoff": alpha,
        "i_alpha": i_alpha,
        "normalization": "amplitude(alpha) = 1",
        "slope_crossover_rho0": None if crossover is None else crossover * protocol.rho0,
        "regime_tags": _regime_tags(z, protocol.l0),
        "quadrature": info,
    }
    return CorrelationCurve(z_grid=z, amplitude=amplitude, metadata=metadata)


def correlation_thermal(
    protocol: QuenchProtocol,
    t: float,
    z_grid,
    temperature: float,
    alpha: float | None = None,
) -> CorrelationCurve:
    """Envelope with thermal occupation of the initial modes.

    The initial thermal state multiplies each mode variance by
    coth(u0 p / 2T); small momenta are then classically enhanced, which
    turns the envelope Gaussian, exp(-z^2/L_corr^2), with

        L_corr = 2 sqrt(l0 L_T0) / (pi K0) * (ln(K0/K(t)))^{1/4},

    crossing over to exponential decay exp(-2 pi K0 z / L_T0) at larger
    distance.  L_T0 = u0/T is the thermal length of the initial modes.

    Parameters
    ----------
    temperature : float
        Initial temperature, > 0 (use correlation_final_zero_t for T = 0).

    Returns
    -------
    CorrelationCurve
        metadata reports l_t0, the closed-form l_corr, and the fitted
        Gaussian-to-exponential crossover location.
    """
    if temperature <= 0.0:
        raise ParameterError(
            f"temperature must be positive, got {temperature}; "
            "the T = 0 curve is correlation_final_zero_t"
        )
    if alpha is None:
        alpha = 1.0 / protocol.rho0
    z = _validate_grid(z_grid, alpha)
    k_t = float(instantaneous_k(protocol, t))
    r_tilde = max(0.0, math.log(protocol.k0 / k_t))
    l_t0 = protocol.u0 / temperature

    integral, info = _i_of_z(protocol, r_tilde, z, alpha, temperature)
    i_alpha, _ = _i_of_z(protocol, r_tilde, np.asarray([alpha]), alpha, temperature)
    i_alpha = float(i_alpha[0])
    log_env = -2.0 * k_t * (np.log(z / alpha) + integral - i_alpha)
    amplitude = np.exp(log_env)

    l_corr = (
        2.0
        * math.sqrt(protocol.l0 * l_t0)
        / (math.pi * protocol.k0)
        * r_tilde**0.25
        if r_tilde > 0.0
        else None
    )
    fitted = gaussian_exponential_crossover(z, amplitude)
    metadata = {
        "kind": "thermal",
        "k0": protocol.k0,
        "k_t": k_t,
        "t": float(t),
        "tau": protocol.tau,
        "l0": protocol.l0,
        "l0_rho0": protocol.l0 * protocol.rho0,
        "rho0": protocol.rho0,
        "alpha_cutoff": alpha,
        "temperature": temperature,
        "l_t0": l_t0,
        "l_t0_rho0": l_t0 * protocol.rho0,
        "l_corr": l_corr,
        "l_corr_rho0": None if l_corr is None else l_corr * protocol.rho0,
        "crossover_fitted_rho0": None if fitted is None else fitted * protocol.rho0,
        "i_alpha": i_alpha,
        "normalization": "amplitude(alpha) = 1",
        "regime_tags": _regime_tags(z, protocol.l0),
        "quadrature": info,
    }
    return CorrelationCurve(z_grid=z, amplitude=amplitude, metadata=metadata)


def log_log_slope(z, amplitude):
    """d ln(amplitude) / d ln(z) by centered differences on the grid."""
    z = np.asarray(z, dtype=float)
    amplitude = np.asarray(amplitude, dtype=float)
    return np.gradient(np.log(amplitude), np.log(z))


def slope_crossover_location(z, amplitude, slope_near, slope_far, *,
                             frac: float = 0.1):
    """Onset of the departure from the near-zone power law.

    The mode integral is flat in momentum below the knee at 1/l0, so
    separations shorter than l0 probe adiabatic modes only and the local
    log-log slope sits on the near plateau.  Frozen modes start to
    contribute exactly at the crossover length, and from there the slope
    drifts toward slope_far over a logarithmically wide window.  The
    crossover is therefore read off at the *onset*: the interpolated z
    where the slope has completed ``frac`` of its total change.  The
    default 10% makes the reading insensitive to whether the far plateau
    has converged inside the grid.  Returns None when the slope never
    departs that far (grid too short).
    """
    s = log_log_slope(z, amplitude)
    target = slope_near + frac * (slope_far - slope_near)
    # slopes here are negative and decreasing toward slope_far
    below = np.nonzero(s <= target)[0]
    if below.size == 0 or below[0] == 0:
        return None
    i = below[0]
    lz = np.log(z)
    frac_i = (target - s[i - 1]) / (s[i] - s[i - 1])
    return float(np.exp(lz[i - 1] + frac_i * (lz[i] - lz[i - 1])))


def gaussian_exponential_crossover(z, amplitude, *, q_tol: float = 0.3,
                                   floor: float = 1e-2):
    """Fitted scale where Gaussian decay hands over to exponential.

    In the Gaussian stretch the envelope follows exp(-z^2/L^2), which
    holds out to z of order L itself before the exponential tail takes
    over, so the fitted 1/e scale L is the crossover location.  The
    Gaussian window is identified through the local power
    q(z) = d ln(-ln amplitude) / d ln z (2 for a Gaussian, 1 for an
    exponential): points with |q - 2| <= q_tol and -ln(amplitude) above
    ``floor`` are kept, and L is the median of z/sqrt(-ln amplitude)
    there, a quantity constant across the window when the stretch really
    is Gaussian.  A window narrower than a factor 1.3 in z is discarded
    (q drifts through 2 momentarily on many non-Gaussian curves, e.g.
    any power law).  Returns None when no qualifying window exists.
    """
    z = np.asarray(z, dtype=float)
    amplitude = np.asarray(amplitude, dtype=float)
    y = -np.log(amplitude)
    good = y > floor
    if np.count_nonzero(good) < 4:
        return None
    zg, yg = z[good], y[good]
    q = np.gradient(np.log(yg), np.log(zg))
    window = np.abs(q - 2.0) <= q_tol
    if np.count_nonzero(window) < 3:
        return None
    zw = zg[window]
    if zw[-1] < 1.3 * zw[0]:
        return None
    return float(np.median(zw / np.sqrt(yg[window])))
