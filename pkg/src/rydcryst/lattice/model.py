"""Discretized 1D gas: lattice container and builders.

The continuum polariton gas is put on a grid with spacing dx (in units of
the interparticle distance 1/rho0).  Kinetic energy discretizes to the
hopping problem

    H_kin = sum_i 2t n_i - t (b+_i b_{i+1} + h.c.),    t = 1/(2 m dx_phys^2),

whose band bottom reproduces k^2/(2m) as k -> 0.  Interactions enter as a
distance table: entry 0 is the on-site pair coefficient U (energy
U n(n-1)/2), entry r >= 1 the two-body energy at separation r grid steps.
On a periodic chain the table is indexed by separation along the line and
folded, V(r) = V_phys(min(r, L - r) dx).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from ..params import ParameterError

__all__ = [
    "LatticeModel",
    "SolverError",
    "build_lattice",
    "build_contact_lattice",
    "with_particles",
]


class SolverError(RuntimeError):
    """A lattice solve failed or produced an unusable result."""


@dataclass(frozen=True)
class LatticeModel:
    """One discretized system: geometry, couplings, and particle sector.

    dx is dimensionless (units of 1/rho0); hop and interaction_table carry
    a common, otherwise arbitrary energy unit.  n_max caps the per-site
    occupation (n_max = 1 is the hard-core gas).
    """

    n_sites: int
    dx: float
    hop: float
    interaction_table: tuple
    boundary: str
    n_max: int
    n_particles: int

    def __post_init__(self):
        if self.n_sites < 2:
            raise ParameterError(f"n_sites must be >= 2, got {self.n_sites}")
        if self.dx <= 0.0:
            raise ParameterError(f"dx must be positive, got {self.dx!r}")
        if self.hop <= 0.0:
            raise ParameterError(f"hop must be positive, got {self.hop!r}")
        if self.boundary not in ("open", "periodic"):
            raise ParameterError(
                f"boundary must be 'open' or 'periodic', got {self.boundary!r}"
            )
        if self.n_max < 1:
            raise ParameterError(f"n_max must be >= 1, got {self.n_max}")
        if not 0 <= self.n_particles <= self.n_sites * self.n_max:
            raise ParameterError(
                f"n_particles = {self.n_particles} does not fit on "
                f"{self.n_sites} sites with n_max = {self.n_max}"
            )
        if len(self.interaction_table) < 1:
            raise ParameterError("interaction_table needs at least the on-site entry")
        if len(self.interaction_table) > self.n_sites:
            raise ParameterError(
                "interaction_table longer than the number of sites"
            )
        if (
            self.boundary == "periodic"
            and 0 < len(self.interaction_table) - 1 < self.n_sites - 1
        ):
            # ring pair energies are looked up through the folded distance,
            # so a partial table would mean different things to different
            # consumers; require one entry per line separation
            raise ParameterError(
                "periodic interaction tables must cover every separation "
                f"({self.n_sites - 1} entries past the on-site one, got "
                f"{len(self.interaction_table) - 1})"
            )
        for v in self.interaction_table:
            if not math.isfinite(v):
                raise ParameterError("interaction_table entries must be finite")

    @property
    def phys_dim(self) -> int:
        return self.n_max + 1

    @property
    def filling(self) -> float:
        return self.n_particles / self.n_sites

    @property
    def range_(self) -> int:
        return len(self.interaction_table) - 1

    def v_pair(self, i: int, j: int) -> float:
        """Two-body energy between distinct sites i and j (0 beyond range)."""
        d = abs(j - i)
        if self.boundary == "periodic":
            d = min(d, self.n_sites - d)
        if 1 <= d <= self.range_:
            return self.interaction_table[d]
        return 0.0

    def bonds(self):
        """Nearest-neighbour hopping bonds, including the ring closure."""
        pairs = [(i, i + 1) for i in range(self.n_sites - 1)]
        if self.boundary == "periodic" and self.n_sites > 2:
            pairs.append((self.n_sites - 1, 0))
        return pairs


def with_particles(model: LatticeModel, n_particles: int) -> LatticeModel:
    """Same lattice, different particle sector (for N ± 1 differences)."""
    return dataclasses.replace(model, n_particles=n_particles)


def _vdw_table(c6, a_cut, dx_phys, n_entries):
    return [c6 / (a_cut**6 + (r * dx_phys) ** 6) for r in range(1, n_entries)]


def build_lattice(rho0, mass, c6, n_sites, dx, *, a_cut=0.0, n_max=3,
                  boundary="open", n_particles=None,
                  v_rel_cutoff=1e-12) -> LatticeModel:
    """Discretize the vdW gas onto n_sites points with spacing dx / rho0.

    The particle number defaults to rho0 * L = n_sites * dx, which must be
    an integer for a commensurate chain; pass n_particles to override (the
    compressibility stencil and grand-canonical-style checks need N ± 1 on
    the same lattice).

    a_cut = 0 with c6 > 0 makes the on-site energy formally infinite and is
    realized as a hard-core constraint (n_max forced to 1, U dropped).  A
    finite a_cut caps the potential at V(0) = c6 / a_cut^6, which also
    becomes the on-site U.  The open-chain table is truncated where
    V(r) < v_rel_cutoff * V(dx_phys); rings keep every separation because
    the folded distance brings far sites close again.
    """
    if rho0 <= 0.0 or mass <= 0.0:
        raise ParameterError("rho0 and mass must be strictly positive")
    if c6 < 0.0 or a_cut < 0.0:
        raise ParameterError("c6 and a_cut must be non-negative")
    dx_phys = dx / rho0
    hop = 1.0 / (2.0 * mass * dx_phys**2)
    if n_particles is None:
        target = n_sites * dx
        n_particles = round(target)
        if abs(target - n_particles) > 1e-9:
            raise ParameterError(
                f"rho0 * L = {target!r} is not an integer particle number; "
                f"adjust n_sites or dx, or pass n_particles explicitly"
            )
    hard_core = c6 > 0.0 and a_cut == 0.0
    if hard_core:
        n_max = 1
        u0 = 0.0
    elif c6 > 0.0:
        u0 = c6 / a_cut**6
    else:
        u0 = 0.0
    if c6 == 0.0:
        table = [u0]
    elif boundary == "periodic":
        folded = [
            c6 / (a_cut**6 + (min(r, n_sites - r) * dx_phys) ** 6)
            for r in range(1, n_sites)
        ]
        table = [u0] + folded
    else:
        tail = _vdw_table(c6, a_cut, dx_phys, n_sites)
        v1 = tail[0]
        keep = len(tail)
        while keep > 1 and tail[keep - 1] < v_rel_cutoff * v1:
            keep -= 1
        table = [u0] + tail[:keep]
    return LatticeModel(
        n_sites=n_sites,
        dx=dx,
        hop=hop,
        interaction_table=tuple(table),
        boundary=boundary,
        n_max=n_max,
        n_particles=n_particles,
    )


def build_contact_lattice(rho0, mass, g_contact, n_sites, dx, *, n_max=3,
                          boundary="periodic",
                          n_particles=None) -> LatticeModel:
    """Discretized contact gas: on-site U = g / dx_phys, no finite range.

    The standard Bose-Hubbard reduction of g * delta(x - x'); used as the
    lattice side of continuum Bethe-ansatz cross-checks.
    """
    if rho0 <= 0.0 or mass <= 0.0:
        raise ParameterError("rho0 and mass must be strictly positive")
    if g_contact < 0.0:
        raise ParameterError(f"g_contact must be non-negative, got {g_contact!r}")
    dx_phys = dx / rho0
    hop = 1.0 / (2.0 * mass * dx_phys**2)
    if n_particles is None:
        target = n_sites * dx
        n_particles = round(target)
        if abs(target - n_particles) > 1e-9:
            raise ParameterError(
                f"rho0 * L = {target!r} is not an integer particle number"
            )
    return LatticeModel(
        n_sites=n_sites,
        dx=dx,
        hop=hop,
        interaction_table=(g_contact / dx_phys,),
        boundary=boundary,
        n_max=n_max,
        n_particles=n_particles,
    )
