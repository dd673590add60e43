"""Fixed-number exact diagonalization of the discretized gas.

The occupation-restricted sector is enumerated once, states are encoded as
base-(n_max + 1) integers so hop targets resolve with a binary search, and
the sparse Hamiltonian goes to a seeded Lanczos (or a dense solve for tiny
sectors).  Everything is deterministic for a fixed seed.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .model import LatticeModel, SolverError

__all__ = ["sector_dimension", "sector_states", "ed_ground_state", "ed_nn_matrix"]


def sector_dimension(n_sites: int, n_particles: int, n_max: int) -> int:
    """Number of occupation configurations, by dynamic programming."""
    counts = np.zeros(n_particles + 1, dtype=object)
    counts[0] = 1
    for _ in range(n_sites):
        new = np.zeros_like(counts)
        for total in range(n_particles + 1):
            if counts[total]:
                for n in range(min(n_max, n_particles - total) + 1):
                    new[total + n] += counts[total]
        counts = new
    return int(counts[n_particles])


def sector_states(n_sites: int, n_particles: int, n_max: int) -> np.ndarray:
    """All occupation vectors with the given total, shape (dim, n_sites).

    Rows come out sorted by the base-(n_max + 1) code with site 0 the most
    significant digit.
    """
    rows = []
    occ = [0] * n_sites

    def fill(site, remaining):
        if site == n_sites - 1:
            if remaining <= n_max:
                occ[site] = remaining
                rows.append(tuple(occ))
            return
        max_rest = (n_sites - site - 1) * n_max
        lo = max(0, remaining - max_rest)
        for n in range(lo, min(n_max, remaining) + 1):
            occ[site] = n
            fill(site + 1, remaining - n)
        occ[site] = 0

    fill(0, n_particles)
    return np.array(rows, dtype=np.int8)


def _codes(occ: np.ndarray, n_max: int) -> np.ndarray:
    base = n_max + 1
    powers = base ** np.arange(occ.shape[1] - 1, -1, -1, dtype=np.int64)
    return occ.astype(np.int64) @ powers


def build_sector_hamiltonian(model: LatticeModel) -> tuple:
    """Sparse H in the fixed-N sector; returns (H_csr, occ)."""
    L = model.n_sites
    occ = sector_states(L, model.n_particles, model.n_max)
    dim = occ.shape[0]
    codes = _codes(occ, model.n_max)
    t = model.hop
    occ_f = occ.astype(np.float64)

    # pair-energy matrix over sites; on-site handled separately
    w = np.zeros((L, L))
    for i in range(L):
        for j in range(L):
            if i != j:
                w[i, j] = model.v_pair(i, j)
    diag = 2.0 * t * model.n_particles * np.ones(dim)
    u0 = model.interaction_table[0]
    chunk = 200_000
    for lo in range(0, dim, chunk):
        hi = min(lo + chunk, dim)
        o = occ_f[lo:hi]
        diag[lo:hi] += 0.5 * np.einsum("si,ij,sj->s", o, w, o, optimize=True)
        if u0 != 0.0:
            diag[lo:hi] += 0.5 * u0 * np.sum(o * (o - 1.0), axis=1)

    rows_all = [np.arange(dim)]
    cols_all = [np.arange(dim)]
    vals_all = [diag]
    base = model.n_max + 1
    powers = base ** np.arange(L - 1, -1, -1, dtype=np.int64)
    for i, j in model.bonds():
        for src, dst in ((i, j), (j, i)):
            mask = (occ[:, src] > 0) & (occ[:, dst] < model.n_max)
            if not np.any(mask):
                continue
            ns = occ_f[mask, src]
            nd = occ_f[mask, dst]
            new_codes = codes[mask] - powers[src] + powers[dst]
            target = np.searchsorted(codes, new_codes)
            if np.any(codes[target] != new_codes):
                raise SolverError("hop target outside enumerated sector")
            rows_all.append(target)
            cols_all.append(np.nonzero(mask)[0])
            vals_all.append(-t * np.sqrt(ns * (nd + 1.0)))

    h = sp.coo_matrix(
        (
            np.concatenate(vals_all),
            (np.concatenate(rows_all), np.concatenate(cols_all)),
        ),
        shape=(dim, dim),
    ).tocsr()
    return h, occ


def ed_ground_state(model: LatticeModel, *, tol=1e-10, seed=1234,
                    dim_limit=2_000_000, maxiter=None):
    """Ground energy and vector; returns (energy, psi, occ, info)."""
    dim = sector_dimension(model.n_sites, model.n_particles, model.n_max)
    if dim > dim_limit:
        raise SolverError(
            f"sector dimension {dim} exceeds the ED limit {dim_limit}"
        )
    h, occ = build_sector_hamiltonian(model)
    if dim == 1:
        return float(h[0, 0]), np.ones(1), occ, {"method": "ED", "dim": 1}
    if dim <= 400:
        wvals, wvecs = np.linalg.eigh(h.toarray())
        info = {"method": "ED", "dim": dim, "solver": "dense"}
        return float(wvals[0]), wvecs[:, 0], occ, info
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim)
    vals, vecs = eigsh(h, k=1, which="SA", v0=v0, tol=tol, maxiter=maxiter)
    info = {"method": "ED", "dim": dim, "solver": "lanczos", "tol": tol}
    return float(vals[0]), vecs[:, 0], occ, info


def ed_nn_matrix(psi: np.ndarray, occ: np.ndarray):
    """(<n_i n_j>, <n_i>) from a sector vector; diagonal is <n_i^2>."""
    w = psi * psi
    occ_f = occ.astype(np.float64)
    dens = occ_f.T @ w
    nn = (occ_f * w[:, None]).T @ occ_f
    return nn, dens
