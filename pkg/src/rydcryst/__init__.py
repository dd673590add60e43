"""rydcryst: Wigner crystallization of Rydberg dark-state polaritons in 1D.

Library + CLI for deriving polariton dispersion and Luttinger parameters,
solving the discretized interacting gas (ED / DMRG), and evolving the
post-quench Luttinger theory to crystalline correlations.
"""

from .params import ExperimentalParams, ParameterError
from .polariton import (
    DispersionBranches,
    PolaritonDerived,
    RegimeError,
    ValidityAudit,
    derive_polariton,
    dispersion_dsp,
    dispersion_exact,
    validity_audit,
)
from .luttinger import (
    CDW,
    CRITICAL,
    SUPERFLUID,
    LuttingerParams,
    c6_for_theta,
    cdw_regime,
    correlation_exponents,
    k_closed_form,
    luttinger_from_params,
    od_c_for_theta,
    pinning_threshold,
    theta_experimental,
    theta_ll,
)
from .curves import CorrelationCurve
from .lattice import LatticeModel, build_lattice
from .lattice.solve import KEstimate, SolverError, compressibility_k, ground_state
from .quench import (
    QuenchProtocol,
    QuenchState,
    CrossoverLengths,
    SwitchTimeBound,
    protocol_from_params,
    instantaneous_k,
    crossover_length,
    min_switch_time,
    temperature_cap,
    evolve_bogoliubov,
    correlation_final_zero_t,
    correlation_thermal,
)

__version__ = "0.1.0"

__all__ = [
    "ExperimentalParams",
    "ParameterError",
    "PolaritonDerived",
    "DispersionBranches",
    "ValidityAudit",
    "RegimeError",
    "derive_polariton",
    "dispersion_exact",
    "dispersion_dsp",
    "validity_audit",
    "LuttingerParams",
    "SUPERFLUID",
    "CRITICAL",
    "CDW",
    "theta_ll",
    "c6_for_theta",
    "k_closed_form",
    "theta_experimental",
    "od_c_for_theta",
    "cdw_regime",
    "correlation_exponents",
    "pinning_threshold",
    "luttinger_from_params",
    "CorrelationCurve",
    "LatticeModel",
    "build_lattice",
    "KEstimate",
    "SolverError",
    "compressibility_k",
    "ground_state",
    "QuenchProtocol",
    "QuenchState",
    "CrossoverLengths",
    "SwitchTimeBound",
    "protocol_from_params",
    "instantaneous_k",
    "crossover_length",
    "min_switch_time",
    "temperature_cap",
    "evolve_bogoliubov",
    "correlation_final_zero_t",
    "correlation_thermal",
    "__version__",
]
