"""Raw experimental inputs and their validation.

All fields are SI (rad/s for rates and energies with hbar = 1, k_B = 1;
meters for lengths).  Instances are immutable; every derived quantity lives
in :mod:`rydcryst.polariton`.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .units import C_LIGHT


class ParameterError(ValueError):
    """An input parameter violates its domain constraint."""


_POSITIVE_FIELDS = ("g_sqrt_n", "gamma", "omega_c", "c", "q_p", "rho0", "medium_len")
_NON_NEGATIVE_FIELDS = ("c6", "a_cut", "temperature")


@dataclass(frozen=True)
class ExperimentalParams:
    """Physical inputs of the Rydberg-EIT medium.

    Attributes
    ----------
    g_sqrt_n : float
        Collective atom-light coupling g*sqrt(n) (rad/s).
    gamma : float
        Half-linewidth of the intermediate state (rad/s); the full
        spontaneous decay rate is 2*gamma.
    delta_1 : float
        One-photon detuning Delta (rad/s), signed.  Magnitude enters all
        length/mass formulas; the sign is kept for the dispersion.
    delta_2 : float
        Two-photon detuning delta (rad/s), signed.
    omega_c : float
        Control-field Rabi frequency Omega (rad/s).
    c : float
        Vacuum light speed (m/s).
    q_p : float
        Probe carrier wavenumber (1/m).
    c6 : float
        van-der-Waals coefficient C6 (rad/s * m^6), non-negative.
    a_cut : float
        Short-distance regularization cutoff of the interaction (m).
    rho0 : float
        1D excitation density (1/m).
    medium_len : float
        Medium length L (m).
    temperature : float
        Initial polariton temperature (rad/s, k_B = 1); zero allowed.
    """

    g_sqrt_n: float
    gamma: float
    delta_1: float
    omega_c: float
    q_p: float
    rho0: float
    medium_len: float
    delta_2: float = 0.0
    c: float = C_LIGHT
    c6: float = 0.0
    a_cut: float = 0.0
    temperature: float = 0.0

    def __post_init__(self) -> None:
        for name in _POSITIVE_FIELDS:
            value = getattr(self, name)
            if not value > 0.0:
                raise ParameterError(f"{name} must be strictly positive, got {value!r}")
        for name in _NON_NEGATIVE_FIELDS:
            value = getattr(self, name)
            if value < 0.0:
                raise ParameterError(f"{name} must be non-negative, got {value!r}")
        # The dispersive model is undefined exactly on one-photon resonance;
        # near-resonant inputs are allowed but flagged by the validity audit.
        if self.delta_1 == 0.0:
            raise ParameterError("delta_1 must be nonzero (dispersive regime)")

    def replace(self, **changes: float) -> "ExperimentalParams":
        """Return a copy with the given fields replaced (re-validated)."""
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, float]) -> "ExperimentalParams":
        """Build from a mapping of SI-unit fields.

        Unknown keys are rejected by name so that typos in input files fail
        loudly instead of silently falling back to defaults.
        """
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ParameterError(f"unknown parameter keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_json_file(cls, path: str) -> "ExperimentalParams":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))

    def to_json_file(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_dict(), handle, indent=2, sort_keys=True)
            handle.write("\n")
