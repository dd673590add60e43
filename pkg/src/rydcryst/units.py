"""Unit conversion between SI inputs and the internal natural-unit system.

All physics routines work on dimensionless ratios, which is equivalent to
fixing hbar = 1, energy measured in units of the intermediate-state
half-linewidth and length in units of the resonant absorption length.  The
converters below are plain scale-factor maps; they are the only place where
raw SI magnitudes (rates spanning many orders of magnitude) are touched.
"""

from __future__ import annotations

C_LIGHT = 299_792_458.0  # vacuum light speed (m/s)


def natural_scales(gamma: float, l_abs: float) -> dict[str, float]:
    """Scale factors mapping SI values to natural units (hbar = 1).

    Divide an SI value by the factor for its kind to obtain the natural-unit
    value; multiply to go back.

    Parameters
    ----------
    gamma : float
        Energy scale, the half-linewidth (rad/s).
    l_abs : float
        Length scale, the resonant absorption length (m).
    """
    if gamma <= 0.0 or l_abs <= 0.0:
        raise ValueError("natural_scales requires positive gamma and l_abs")
    return {
        "energy": gamma,            # rad/s
        "frequency": gamma,         # rad/s
        "time": 1.0 / gamma,        # s
        "length": l_abs,            # m
        "wavenumber": 1.0 / l_abs,  # 1/m
        "density_1d": 1.0 / l_abs,  # 1/m
        "velocity": l_abs * gamma,  # m/s
        # hbar = 1: mass ~ 1 / (length^2 * energy)
        "mass": 1.0 / (l_abs**2 * gamma),     # s/m^2
        "c6": gamma * l_abs**6,               # rad/s * m^6
        "temperature": gamma,                 # rad/s (k_B = 1)
    }


def to_natural(value: float, kind: str, scales: dict[str, float]) -> float:
    """Convert an SI value of the given kind into natural units."""
    return value / scales[kind]


def from_natural(value: float, kind: str, scales: dict[str, float]) -> float:
    """Convert a natural-unit value of the given kind back to SI."""
    return value * scales[kind]
