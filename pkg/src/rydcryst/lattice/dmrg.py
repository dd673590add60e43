"""Two-site DMRG with a one-site finishing phase.

No quantum numbers are tracked; particle-number conservation is kept
honest by a quadratic penalty in the MPO (zero on the target sector) plus
post-solve checks on <N> and <(N - N0)^2>.  The local eigenproblem is
solved with a hand-rolled fully-reorthogonalized Lanczos, warm-started
from the current two-site tensor, so late-sweep updates cost only a few
matvecs.

Environments are stored as (w, top, bot) arrays; the MPO blocks stay in
their sparse {(row, col): matrix} form and are applied block by block.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .model import LatticeModel, SolverError
from .mpo import SparseMPO, build_mpo, default_penalty
from .mps import MPSState, product_state, spread_occupations

__all__ = ["dmrg_ground_state"]


def _lanczos_ground(matvec, v0, max_iter=60, tol=1e-12):
    """Smallest Ritz pair of a symmetric operator; returns (val, vec, nmv)."""
    shape = v0.shape
    v = v0.ravel().astype(float, copy=True)
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise SolverError("Lanczos started from the zero vector")
    v /= nrm
    basis = [v]
    alphas, betas = [], []
    evecs = np.ones((1, 1))
    n_mv = 0
    for _ in range(max_iter):
        w = matvec(basis[-1].reshape(shape)).ravel()
        n_mv += 1
        alphas.append(float(basis[-1] @ w))
        w -= alphas[-1] * basis[-1]
        if betas:
            w -= betas[-1] * basis[-2]
        # full reorthogonalization: cheap at these basis sizes and immune
        # to the classic Lanczos ghost problem
        for u in basis:
            w -= (u @ w) * u
        vals, evecs = eigh_tridiagonal(alphas, betas)
        beta = float(np.linalg.norm(w))
        resid = beta * abs(evecs[-1, 0])
        scale = max(1.0, float(np.max(np.abs(vals))))
        if resid <= tol * max(1.0, abs(vals[0])) or beta < 1e-14 * scale:
            break
        basis.append(w / beta)
        betas.append(beta)
    ground = np.zeros_like(v)
    for j in range(len(alphas)):
        ground += evecs[j, 0] * basis[j]
    ground /= np.linalg.norm(ground)
    return float(vals[0]), ground.reshape(shape), n_mv


def _apply_blocks(blocks, t):
    """Apply one sparse W to t[(w, ..., phys, ...)] with phys at axis 2."""
    out = np.zeros_like(t)
    for (a, bb), m in blocks.items():
        tm = np.tensordot(m, t[a], axes=(1, 1))  # (phys', ax1, rest...)
        out[bb] += np.moveaxis(tm, 0, 1)
    return out


def _two_site_matvec(le, w1, w2, re, x):
    # x: (cl, d, d, cr); le/re: (w, top, bot)
    t = np.tensordot(le, x, axes=(2, 0))  # (w, clt, d, d, cr)
    t = _apply_blocks(w1, t)
    t = np.moveaxis(t, 3, 2)  # bring second phys leg next to w for W2
    t = _apply_blocks(w2, t)
    t = np.moveaxis(t, 3, 2)
    return np.tensordot(t, re, axes=([0, 4], [0, 2]))  # (clt, d, d, crt)


def _one_site_matvec(le, w, re, x):
    t = np.tensordot(le, x, axes=(2, 0))  # (w, clt, d, cr)
    t = _apply_blocks(w, t)
    return np.tensordot(t, re, axes=([0, 3], [0, 2]))


def _extend_left(le, blocks, a):
    t = np.tensordot(le, a, axes=(2, 0))  # (w, top, d, bot')
    out = np.zeros((le.shape[0], a.shape[2], a.shape[2]))
    for (wa, wb), m in blocks.items():
        tm = np.tensordot(m, t[wa], axes=(1, 1))  # (d', top, bot')
        out[wb] += np.tensordot(a.conj(), tm, axes=([0, 1], [1, 0]))
    return out


def _extend_right(re, blocks, a):
    t = np.tensordot(a, re, axes=(2, 2))  # (bot', d, w, top)
    out = np.zeros((re.shape[0], a.shape[0], a.shape[0]))
    for (wa, wb), m in blocks.items():
        tm = np.tensordot(m, t[:, :, wb, :], axes=(1, 1))  # (d', bot', top)
        out[wa] += np.tensordot(a.conj(), tm, axes=([1, 2], [0, 2]))
    return out


def _split_two_site(theta, chi_cap, trunc_tol, to_right):
    cl, d1, d2, cr = theta.shape
    u, s, vh = np.linalg.svd(
        theta.reshape(cl * d1, d2 * cr), full_matrices=False
    )
    total = float(np.sum(s * s))
    keep = len(s)
    while keep > 1 and float(np.sum(s[keep - 1:] ** 2)) <= trunc_tol * total:
        keep -= 1
    keep = min(keep, chi_cap)
    discarded = float(np.sum(s[keep:] ** 2) / total)
    s = s[:keep] / np.linalg.norm(s[:keep])
    u = u[:, :keep]
    vh = vh[:keep]
    if to_right:
        left = u.reshape(cl, d1, keep)
        right = (s[:, None] * vh).reshape(keep, d2, cr)
    else:
        left = (u * s[None, :]).reshape(cl, d1, keep)
        right = vh.reshape(keep, d2, cr)
    return left, right, keep, discarded


def dmrg_ground_state(model: LatticeModel, *, chi_max=64, penalty=None,
                      max_sweeps=24, e_tol=1e-10, trunc_tol=1e-12,
                      one_site_sweeps=2, lanczos_iters=60, mpo=None,
                      initial=None, number_tol=1e-6):
    """Variational ground state of ``model``; returns (energy, mps, info).

    The two-site phase runs until the per-sweep energy change falls below
    max(e_tol, 50 * discarded_weight) (both relative to |E|), then the
    one-site phase polishes at fixed bond dimension, which is strictly
    variational so the reported energy is an upper bound.  The best state
    seen is kept in case a truncation bump made the last sweep worse.
    """
    if mpo is None:
        lam = default_penalty(model) if penalty is None else penalty
        mpo = build_mpo(model, penalty=lam)
    else:
        lam = mpo.info.get("penalty", 0.0)
    L = model.n_sites
    if initial is None:
        occ = spread_occupations(L, model.n_particles, model.n_max)
        mps = product_state(occ, model.phys_dim)
    else:
        mps = initial.copy()
    mps.canonicalize(0)

    dbond = mpo.bond_dim
    les = [None] * (L + 1)
    res = [None] * (L + 1)
    le0 = np.zeros((dbond, 1, 1))
    le0[0, 0, 0] = 1.0
    re0 = np.zeros((dbond, 1, 1))
    re0[-1, 0, 0] = 1.0
    les[0] = le0
    res[L] = re0  # res[i+1] is the environment right of site i
    for i in range(L - 1, 0, -1):
        res[i] = _extend_right(res[i + 1], mpo.blocks[i], mps.tensors[i])

    chi_ramp = [min(8, chi_max), min(16, chi_max), min(32, chi_max)]
    history = []
    best_e, best_state = np.inf, None
    max_disc_global = 0.0
    n_mv_total = 0
    converged = False
    energy = np.inf

    for sweep in range(max_sweeps):
        chi_now = chi_ramp[sweep] if sweep < len(chi_ramp) else chi_max
        lz_tol = 1e-8 if sweep < 2 else 1e-13
        max_disc = 0.0

        def update(i, to_right):
            nonlocal max_disc, n_mv_total, energy
            theta0 = np.tensordot(mps.tensors[i], mps.tensors[i + 1], axes=(2, 0))
            w1, w2 = mpo.blocks[i], mpo.blocks[i + 1]
            le, re = les[i], res[i + 2]
            val, theta, nmv = _lanczos_ground(
                lambda x: _two_site_matvec(le, w1, w2, re, x),
                theta0, max_iter=lanczos_iters, tol=lz_tol,
            )
            n_mv_total += nmv
            left, right, chi, disc = _split_two_site(
                theta, chi_now, trunc_tol, to_right
            )
            max_disc = max(max_disc, disc)
            mps.tensors[i], mps.tensors[i + 1] = left, right
            if disc > 0.0:
                mps.truncation_log.append(
                    {"bond": i, "chi": chi, "discarded": disc}
                )
            if to_right:
                mps.canonical_flags[i] = "L"
                mps.canonical_flags[i + 1] = "C"
                les[i + 1] = _extend_left(les[i], w1, left)
            else:
                mps.canonical_flags[i] = "C"
                mps.canonical_flags[i + 1] = "R"
                res[i + 1] = _extend_right(res[i + 2], w2, right)
            energy = val

        for i in range(L - 1):
            update(i, to_right=True)
        for i in range(L - 2, -1, -1):
            update(i, to_right=False)

        history.append(energy)
        max_disc_global = max(max_disc_global, max_disc)
        if energy < best_e - 1e-14 * abs(energy):
            best_e, best_state = energy, mps.copy()
        if len(history) >= 2:
            delta = abs(history[-2] - history[-1])
            floor = max(e_tol, 50.0 * max_disc) * max(1.0, abs(energy))
            if delta < floor:
                converged = True
                break

    two_site_sweeps = len(history)

    # one-site polish: no truncation, monotone by construction
    def solve_one(i):
        nonlocal energy, n_mv_total
        le, re = les[i], res[i + 1]
        blocks = mpo.blocks[i]
        val, a, nmv = _lanczos_ground(
            lambda x: _one_site_matvec(le, blocks, re, x),
            mps.tensors[i], max_iter=lanczos_iters, tol=1e-13,
        )
        n_mv_total += nmv
        mps.tensors[i] = a
        energy = val

    for _ in range(one_site_sweeps):
        for i in range(L - 1):
            solve_one(i)
            mps._push_right(i)
            mps.canonical_flags[i] = "L"
            mps.canonical_flags[i + 1] = "C"
            les[i + 1] = _extend_left(les[i], mpo.blocks[i], mps.tensors[i])
        for i in range(L - 1, 0, -1):
            solve_one(i)
            mps._push_left(i)
            mps.canonical_flags[i] = "R"
            mps.canonical_flags[i - 1] = "C"
            res[i] = _extend_right(res[i + 1], mpo.blocks[i], mps.tensors[i])
        history.append(energy)
        if energy < best_e:
            best_e, best_state = energy, mps.copy()

    if best_state is not None and best_e < energy:
        mps = best_state
        energy = best_e

    n_total = mps.total_number()
    n_var = mps.number_variance(float(model.n_particles))
    if abs(n_total - model.n_particles) > number_tol:
        raise SolverError(
            f"particle number drifted: <N> = {n_total!r} vs "
            f"{model.n_particles} (variance {n_var!r}); raise the penalty"
        )

    info = {
        "method": "DMRG",
        "energy_history": history,
        "sweeps_two_site": two_site_sweeps,
        "sweeps_one_site": one_site_sweeps,
        "converged": converged,
        "max_bond": mps.max_bond,
        "max_discarded": max_disc_global,
        "n_matvec": n_mv_total,
        "penalty": lam,
        "n_total": n_total,
        "n_variance": n_var,
        "interaction_mode": mpo.info.get("interaction_mode"),
        "fit_error": mpo.info.get("fit_error"),
        "final_delta_e": abs(history[-1] - history[-2]) if len(history) > 1 else np.inf,
    }
    return energy, mps, info
