"""Shared result container for correlation curves.

Both the lattice g2 estimators and the quench correlation integrals return
a curve over a spatial grid; a single container keeps the CSV writers and
tests agnostic about which engine produced the data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["CorrelationCurve"]


@dataclass(frozen=True)
class CorrelationCurve:
    """A sampled correlation function over a spatial grid.

    z_grid and amplitude are equal-length 1D arrays; metadata carries
    whatever the producer wants downstream (method, parameters, regime
    tags per point, ...).  Instances are frozen but the arrays are not
    copied; treat them as read-only.
    """

    z_grid: np.ndarray
    amplitude: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        z = np.asarray(self.z_grid, dtype=float)
        a = np.asarray(self.amplitude, dtype=float)
        if z.ndim != 1 or a.ndim != 1 or z.size != a.size:
            raise ValueError(
                f"z_grid and amplitude must be equal-length 1D arrays, "
                f"got shapes {z.shape} and {a.shape}"
            )
        object.__setattr__(self, "z_grid", z)
        object.__setattr__(self, "amplitude", a)

    def __len__(self) -> int:
        return self.z_grid.size
