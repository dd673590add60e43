"""Matrix-product states: container, canonicalization, and measurements.

Tensors are stored as (chi_left, phys, chi_right) arrays.  The state keeps
one orthogonality center; tensors left of it are left-isometries ("L"),
tensors right of it right-isometries ("R").  All measurement routines
assume nothing about the flags and canonicalize defensively when needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..params import ParameterError

__all__ = [
    "MPSState",
    "product_state",
    "spread_occupations",
    "expectation_mpo",
]


@dataclass
class MPSState:
    """MPS with orthogonality-center bookkeeping and a truncation log.

    canonical_flags[i] is "L", "R", or "C"; exactly one site is "C" when
    the state is in mixed-canonical form.  truncation_log records one dict
    per truncating split: {"bond", "chi", "discarded"} with ``discarded``
    the relative discarded weight sum(s_cut^2)/sum(s^2).
    """

    tensors: list
    canonical_flags: list
    truncation_log: list = field(default_factory=list)

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def phys_dim(self) -> int:
        return self.tensors[0].shape[1]

    @property
    def center(self) -> int:
        return self.canonical_flags.index("C")

    @property
    def max_bond(self) -> int:
        return max(t.shape[2] for t in self.tensors)

    def copy(self) -> "MPSState":
        return MPSState(
            [t.copy() for t in self.tensors],
            list(self.canonical_flags),
            list(self.truncation_log),
        )

    # -- canonical form ---------------------------------------------------

    def canonicalize(self, center: int = 0) -> "MPSState":
        """Bring to mixed-canonical form with the center at ``center``."""
        L = self.n_sites
        if not 0 <= center < L:
            raise ParameterError(f"center {center} out of range")
        for i in range(center):
            self._push_right(i)
        for i in range(L - 1, center, -1):
            self._push_left(i)
        self.canonical_flags = (
            ["L"] * center + ["C"] + ["R"] * (L - center - 1)
        )
        return self

    def _push_right(self, i):
        a = self.tensors[i]
        cl, d, cr = a.shape
        q, r = np.linalg.qr(a.reshape(cl * d, cr))
        self.tensors[i] = q.reshape(cl, d, q.shape[1])
        self.tensors[i + 1] = np.tensordot(r, self.tensors[i + 1], axes=(1, 0))

    def _push_left(self, i):
        a = self.tensors[i]
        cl, d, cr = a.shape
        q, r = np.linalg.qr(a.reshape(cl, d * cr).T)
        self.tensors[i] = q.T.reshape(q.shape[1], d, cr)
        self.tensors[i - 1] = np.tensordot(self.tensors[i - 1], r.T, axes=(2, 0))

    def move_center(self, to: int):
        """Shift the orthogonality center without truncation."""
        c = self.center
        while c < to:
            self._push_right(c)
            self.canonical_flags[c] = "L"
            c += 1
            self.canonical_flags[c] = "C"
        while c > to:
            self._push_left(c)
            self.canonical_flags[c] = "R"
            c -= 1
            self.canonical_flags[c] = "C"
        return self

    # -- measurements ------------------------------------------------------

    def norm2(self) -> float:
        """<psi|psi> by full transfer contraction (no canonicity assumed)."""
        e = np.ones((1, 1))
        for a in self.tensors:
            e = np.tensordot(e, a, axes=(0, 0))
            e = np.tensordot(a.conj(), e, axes=([0, 1], [0, 1]))
        return float(e.real[0, 0])

    def site_densities(self, op=None) -> np.ndarray:
        """<op_i> for every site (op defaults to the number operator)."""
        d = self.phys_dim
        if op is None:
            op = np.diag(np.arange(d, dtype=float))
        self.canonicalize(0)
        nrm2 = float(np.vdot(self.tensors[0], self.tensors[0]).real)
        out = np.empty(self.n_sites)
        for i in range(self.n_sites):
            if i > 0:
                self.move_center(i)
            a = self.tensors[i]
            aw = np.tensordot(op, a, axes=(1, 1)).transpose(1, 0, 2)
            out[i] = np.tensordot(a.conj(), aw, axes=3).real / nrm2
        return out

    def two_point_nn(self) -> np.ndarray:
        """All <n_i n_j>; diagonal holds <n_i^2>.

        One dressed-environment sweep per reference site: O(L^2 chi^3 d)
        overall.
        """
        L = self.n_sites
        d = self.phys_dim
        nop = np.diag(np.arange(d, dtype=float))
        out = np.zeros((L, L))
        self.canonicalize(0)
        nrm2 = float(np.vdot(self.tensors[0], self.tensors[0]).real)
        for i in range(L):
            if i > 0:
                self.move_center(i)
            a = self.tensors[i]
            an = np.tensordot(nop, a, axes=(1, 1)).transpose(1, 0, 2)
            out[i, i] = np.tensordot(
                a.conj(), np.tensordot(nop, an, axes=(1, 1)).transpose(1, 0, 2),
                axes=3,
            ).real
            # dressed right-going environment carrying one n at site i
            env = np.tensordot(a.conj(), an, axes=([0, 1], [0, 1]))
            for j in range(i + 1, L):
                b_ = self.tensors[j]
                bn = np.tensordot(nop, b_, axes=(1, 1)).transpose(1, 0, 2)
                out[i, j] = np.einsum(
                    "ab,aic,bic->", env, b_.conj(), bn, optimize=True
                ).real
                out[j, i] = out[i, j]
                if j < L - 1:
                    env = np.einsum(
                        "ab,aic,bid->cd", env, b_.conj(), b_, optimize=True
                    )
        return out / nrm2

    def total_number(self) -> float:
        return float(np.sum(self.site_densities()))

    def number_variance(self, n_target: float) -> float:
        """<(N - n_target)^2>."""
        nn = self.two_point_nn()
        dens = self.site_densities()
        n2 = float(np.sum(nn))
        n1 = float(np.sum(dens))
        return n2 - 2.0 * n_target * n1 + n_target**2


def spread_occupations(n_sites: int, n_particles: int, n_max: int) -> list:
    """Evenly spread N particles over L sites (round-robin past filling 1)."""
    occ = [0] * n_sites
    left = n_particles
    while left > 0:
        batch = min(left, n_sites)
        for q in range(batch):
            pos = int((q + 0.5) * n_sites / batch)
            pos = min(pos, n_sites - 1)
            while occ[pos] >= n_max:
                pos = (pos + 1) % n_sites
            occ[pos] += 1
        left -= batch
    return occ


def product_state(occupations, phys_dim: int) -> MPSState:
    """chi = 1 product state with the given site occupations."""
    tensors = []
    for n in occupations:
        if not 0 <= n < phys_dim:
            raise ParameterError(
                f"occupation {n} outside local dimension {phys_dim}"
            )
        a = np.zeros((1, phys_dim, 1))
        a[0, n, 0] = 1.0
        tensors.append(a)
    flags = ["C"] + ["R"] * (len(tensors) - 1)
    return MPSState(tensors, flags)


def expectation_mpo(mps: MPSState, mpo) -> float:
    """<psi| H |psi> / <psi|psi> by direct environment contraction."""
    env = np.zeros((1, mpo.bond_dim, 1))
    env[0, 0, 0] = 1.0
    for site in range(mps.n_sites):
        a = mps.tensors[site]
        nxt = np.zeros(
            (a.shape[2], mpo.bond_dim, a.shape[2]), dtype=np.result_type(a, env)
        )
        t = np.tensordot(env, a, axes=(2, 0))  # (top, w, d_in, right_bot)
        for (wa, wb), m in mpo.blocks[site].items():
            tw = np.tensordot(m, t[:, wa, :, :], axes=(1, 1))  # (d_out, top, rb)
            nxt[:, wb, :] += np.tensordot(
                a.conj(), tw, axes=([0, 1], [1, 0])
            )
        env = nxt
    return float(env[0, -1, 0].real) / mps.norm2()
