"""Matrix-product operator for the discretized gas.

The Hamiltonian is encoded as a left-to-right finite-state machine: state 0
is "nothing placed yet", the last state is "term complete", and channels in
between carry half-finished two-body terms.  Density-density interactions
use one channel per separation (direct mode) or, for long open-chain
tables, a hybrid of exact short-separation channels plus a fitted sum of
exponentials whose decay becomes a diagonal transfer weight (keeps the
bond dimension near the number of exponentials instead of the interaction
range).

An optional quadratic particle-number penalty lambda (N - N0)^2 is folded
in through a single accumulator channel; it vanishes on the target sector,
so on-sector spectra are unshifted, and it stops truncation roundoff from
leaking the variational state into neighbouring sectors.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import least_squares

from ..params import ParameterError
from .model import LatticeModel

__all__ = [
    "SparseMPO",
    "build_mpo",
    "default_penalty",
    "fit_exponential_sum",
    "boson_ops",
]

# separations encoded exactly in hybrid mode; the exponential fit only has
# to track the smooth remainder beyond this, where the local logarithmic
# slope of a power-law tail varies slowly
HEAD_RANGE = 8


def boson_ops(n_max: int):
    """Truncated annihilation, creation, and number matrices."""
    d = n_max + 1
    b = np.zeros((d, d))
    for m in range(1, d):
        b[m - 1, m] = np.sqrt(m)
    return b, b.T.copy(), np.diag(np.arange(d, dtype=float))


class SparseMPO:
    """Per-site MPO tensors stored as {(row, col): (d, d) block} dicts.

    Contracted as e_0^T W[0] ... W[L-1] e_{D-1}: row 0 is the source state
    and the last row the sink.
    """

    def __init__(self, blocks, bond_dim, phys_dim, info=None):
        self.blocks = blocks
        self.bond_dim = bond_dim
        self.phys_dim = phys_dim
        self.info = info or {}

    @property
    def n_sites(self):
        return len(self.blocks)

    def dense_hamiltonian(self) -> np.ndarray:
        """Contract to the full many-body matrix (small systems only)."""
        d = self.phys_dim
        dim = d**self.n_sites
        if dim > 4096:
            raise ParameterError(
                f"dense contraction of a {dim}-dimensional space refused"
            )
        dbond = self.bond_dim
        # carry[a] = sum of operator strings ending in FSM state a
        carry = {0: np.eye(1)}
        for site in range(self.n_sites):
            new = {}
            for (a, b), m in self.blocks[site].items():
                if a not in carry:
                    continue
                term = np.kron(carry[a], m)
                if b in new:
                    new[b] = new[b] + term
                else:
                    new[b] = term
            carry = new
        return carry[dbond - 1]


def fit_exponential_sum(values, tol_rel, max_terms=16, r_start=1):
    """Fit values[j] ~ sum_k c_k x_k^(r_start+j) with x_k in (0, 1).

    Variable-projection least squares on point-wise *relative* residuals:
    the decay rates are optimized while the coefficients are solved
    linearly at each step.  Relative weighting matters for steep tails (a
    van der Waals table spans many decades and only the accuracy near the
    mean particle spacing is physical).  Seeds span the local logarithmic
    slopes at the two ends of the data, and the best result over the term
    count is kept.  Returns (c, x, err) with err = max relative residual
    <= tol_rel, or None when max_terms exponentials do not reach the
    tolerance.
    """
    v = np.asarray(values, dtype=float)
    r = np.arange(r_start, r_start + v.size, dtype=float)
    scale = np.abs(v)
    scale[scale == 0.0] = scale.max() if scale.max() > 0.0 else 1.0

    def rates(s):
        # decay length exp(s) > 0 maps to a rate strictly inside (0, 1);
        # the cap keeps exp() finite when the optimizer wanders
        return np.minimum(1.0 / np.exp(s), 50.0)

    def coeffs(s):
        a = np.exp(-np.outer(r, rates(s)))
        c, *_ = np.linalg.lstsq(a / scale[:, None], v / scale, rcond=None)
        return a, c

    def resid(s):
        a, c = coeffs(s)
        return (a @ c - v) / scale

    # local decay lengths at the two ends of the window bracket the seeds
    with np.errstate(divide="ignore", over="ignore"):
        l_lo = l_hi = 1.0
        if v.size >= 2 and scale[0] > scale[1] > 0.0:
            l_lo = 1.0 / np.log(scale[0] / scale[1])
        if v.size >= 2 and scale[-2] > scale[-1] > 0.0:
            l_hi = 1.0 / np.log(scale[-2] / scale[-1])
    lo = max(0.8 * min(l_lo, l_hi), 0.05)
    hi = max(1.5 * max(l_lo, l_hi, float(v.size)), 2.0 * lo)

    best = None
    # the lm driver needs at least as many residuals as parameters
    n_cap = max(1, min(max_terms, v.size // 2))
    for n in range(1, n_cap + 1):
        s0 = np.log(np.geomspace(lo, hi, n)) if n > 1 else [np.log(hi)]
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            sol = least_squares(
                resid,
                np.asarray(s0, dtype=float),
                method="lm",
                xtol=1e-14,
                ftol=1e-14,
                gtol=1e-14,
                max_nfev=400 * (n + 1),
            )
            a, c = coeffs(sol.x)
            err = float(np.max(np.abs(a @ c - v) / scale))
        if np.isfinite(err) and (best is None or err < best[2]):
            best = (np.asarray(c), np.exp(-rates(sol.x)), err)
        if best is not None and best[2] <= tol_rel:
            break
    if best is not None and best[2] <= tol_rel:
        return best
    return None


def default_penalty(model: LatticeModel) -> float:
    """Number-penalty scale: well above hopping and the typical pair energy.

    [H, N] = 0, so the penalty only has to dominate roundoff-level sector
    leakage, not compete with physical couplings; one order of magnitude
    above the local energy scale is plenty without hurting conditioning.
    """
    table = model.interaction_table
    if model.filling > 0.0:
        d_int = max(1, round(1.0 / model.filling))
    else:
        d_int = 1
    v_typ = abs(table[min(d_int, len(table) - 1)]) if len(table) > 1 else 0.0
    return 10.0 * (4.0 * model.hop + 4.0 * v_typ + abs(table[0]))


def build_mpo(model: LatticeModel, *, penalty: float = 0.0,
              fit_tol: float = 5e-4, max_exp: int = 16,
              force_direct: bool = False) -> SparseMPO:
    """Assemble the Hamiltonian MPO for ``model``.

    penalty > 0 adds penalty * (N_hat - n_particles)^2.  Long open-chain
    interaction tails switch to a hybrid encoding: separations up to
    HEAD_RANGE keep one exact channel each, and the smooth remainder is
    compressed to exponentials accurate to fit_tol in point-wise relative
    terms.  The exponential channels also reach into the head region, so
    the head channels carry the difference V(r) - sum_k c_k x_k^r there
    and every retained separation up to HEAD_RANGE stays exact.  Rings and
    short tables use one channel per separation
    (info["interaction_mode"] records which path was taken).
    """
    L = model.n_sites
    d = model.phys_dim
    b, bdag, n = boson_ops(model.n_max)
    eye = np.eye(d)
    t = model.hop
    table = model.interaction_table
    rng_int = model.range_

    exp_fit = None
    head_rng = 0
    if (
        not force_direct
        and model.boundary == "open"
        and rng_int > HEAD_RANGE + 4
    ):
        head_rng = HEAD_RANGE
        tail = np.asarray(table[head_rng + 1:rng_int + 1], dtype=float)
        exp_fit = fit_exponential_sum(
            tail, tol_rel=fit_tol, max_terms=max_exp, r_start=head_rng + 1
        )

    if exp_fit is not None:
        c_exp, x_exp, fit_err = exp_fit
        n_exp = len(c_exp)
        head = [
            table[rr] - float(np.sum(c_exp * x_exp**rr))
            for rr in range(1, head_rng + 1)
        ]
        n_dens = head_rng + n_exp
        mode = "hybrid"
    else:
        head_rng = 0
        n_exp = 0
        n_dens = rng_int
        mode = "direct" if rng_int > 0 else "none"
        fit_err = 0.0

    # FSM layout: 0 ready | 1,2 hop | density channels | penalty | wrap | sink
    hop_a, hop_b = 1, 2
    dens0 = 3
    idx = dens0 + n_dens
    pen_idx = None
    if penalty > 0.0:
        pen_idx = idx
        idx += 1
    wrap_a = wrap_b = None
    ring_hop = model.boundary == "periodic" and L > 2
    if ring_hop:
        wrap_a, wrap_b = idx, idx + 1
        idx += 2
    sink = idx
    dbond = idx + 1

    onsite = 2.0 * t * n + 0.5 * table[0] * (n @ n - n)
    if penalty > 0.0:
        n0 = float(model.n_particles)
        onsite = onsite + penalty * (n @ n - 2.0 * n0 * n) + (
            penalty * n0 * n0 / L
        ) * eye

    def base_blocks():
        blk = {
            (0, 0): eye,
            (sink, sink): eye,
            (0, sink): onsite,
            (0, hop_a): b,
            (hop_a, sink): -t * bdag,
            (0, hop_b): bdag,
            (hop_b, sink): -t * b,
        }
        if mode == "hybrid":
            for rr in range(1, head_rng + 1):
                ch = dens0 + rr - 1
                if rr == 1:
                    blk[(0, ch)] = n
                if rr < head_rng:
                    blk[(ch, ch + 1)] = eye
                if head[rr - 1] != 0.0:
                    blk[(ch, sink)] = head[rr - 1] * n
            for k in range(n_exp):
                ch = dens0 + head_rng + k
                blk[(0, ch)] = n
                blk[(ch, ch)] = x_exp[k] * eye
                blk[(ch, sink)] = (c_exp[k] * x_exp[k]) * n
        elif mode == "direct":
            for rr in range(1, rng_int + 1):
                ch = dens0 + rr - 1
                if rr == 1:
                    blk[(0, ch)] = n
                if rr < rng_int:
                    blk[(ch, ch + 1)] = eye
                blk[(ch, sink)] = table[rr] * n
        if pen_idx is not None:
            blk[(0, pen_idx)] = n
            blk[(pen_idx, pen_idx)] = eye
            blk[(pen_idx, sink)] = (2.0 * penalty) * n
        return blk

    blocks = []
    for site in range(L):
        blk = base_blocks()
        if ring_hop:
            if site == 0:
                blk[(0, wrap_a)] = bdag
                blk[(0, wrap_b)] = b
            elif site < L - 1:
                blk[(wrap_a, wrap_a)] = eye
                blk[(wrap_b, wrap_b)] = eye
            if site == L - 1:
                blk[(wrap_a, sink)] = -t * b
                blk[(wrap_b, sink)] = -t * bdag
        blocks.append(blk)

    info = {
        "interaction_mode": mode,
        "n_density_channels": n_dens,
        "n_exp_channels": n_exp,
        "head_range": head_rng,
        "fit_error": fit_err,
        "penalty": penalty,
        "bond_dim": dbond,
    }
    return SparseMPO(blocks, dbond, d, info)
