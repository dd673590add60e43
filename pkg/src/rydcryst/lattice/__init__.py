"""Discretized-gas solvers: lattice building, ED, DMRG, and estimators."""

from .model import LatticeModel, SolverError, build_contact_lattice, build_lattice, with_particles
from .mpo import SparseMPO, build_mpo, default_penalty
from .mps import MPSState, expectation_mpo, product_state, spread_occupations
from .dmrg import dmrg_ground_state
from .ed import ed_ground_state, ed_nn_matrix, sector_dimension, sector_states
from .observables import g2_correlation, g2_curve_from_nn, nn_matrix
from .solve import GroundStateResult, KEstimate, compressibility_k, ground_state
from .lieb_liniger import TONKS_E, lieb_liniger_e, lieb_liniger_k

__all__ = [
    "LatticeModel",
    "SolverError",
    "build_lattice",
    "build_contact_lattice",
    "with_particles",
    "SparseMPO",
    "build_mpo",
    "default_penalty",
    "MPSState",
    "product_state",
    "spread_occupations",
    "expectation_mpo",
    "dmrg_ground_state",
    "ed_ground_state",
    "ed_nn_matrix",
    "sector_dimension",
    "sector_states",
    "g2_correlation",
    "g2_curve_from_nn",
    "nn_matrix",
    "GroundStateResult",
    "KEstimate",
    "ground_state",
    "compressibility_k",
    "TONKS_E",
    "lieb_liniger_e",
    "lieb_liniger_k",
]
