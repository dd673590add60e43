"""Sector-space exact diagonalization against brute-force enumeration."""

import numpy as np
import pytest

from rydcryst.lattice import (
    SolverError,
    build_lattice,
    ed_ground_state,
    ed_nn_matrix,
    sector_dimension,
    sector_states,
)

from oracles import (
    dense_nn_correlation,
    dense_sector_ground_state,
    dense_sector_hamiltonian,
    free_fermion_energy,
    sector_basis,
)


def random_table(rng, n_sites, boundary):
    """Physical random table: rings fold one base value per distance."""
    if boundary == "periodic":
        base = rng.uniform(0.0, 2.0, size=n_sites // 2 + 1)
        return tuple(
            float(base[min(r, n_sites - r)]) for r in range(n_sites)
        )
    n_v = int(rng.integers(0, 3))
    return tuple(float(x) for x in rng.uniform(0.0, 2.0, size=n_v + 1))


@pytest.mark.parametrize(
    "L,N,n_max",
    [(4, 2, 1), (5, 3, 2), (6, 2, 3), (3, 3, 3), (7, 1, 1), (4, 8, 2)],
)
def test_sector_enumeration_matches_brute_force(L, N, n_max):
    states = sector_states(L, N, n_max)
    ref = sector_basis(L, N, n_max)
    assert sector_dimension(L, N, n_max) == len(ref)
    assert states.shape == (len(ref), L)
    assert {tuple(int(x) for x in s) for s in states} == set(ref)


def test_sector_states_sorted_by_code():
    # the hop lookup binary-searches the base-(n_max+1) codes, so the
    # enumeration must come out strictly increasing
    states = sector_states(6, 3, 2)
    powers = 3 ** np.arange(5, -1, -1)
    codes = states.astype(np.int64) @ powers
    assert np.all(np.diff(codes) > 0)


def test_empty_and_full_sectors():
    assert sector_dimension(5, 0, 2) == 1
    assert sector_dimension(5, 10, 2) == 1
    assert sector_dimension(5, 11, 2) == 0


def test_sector_hamiltonian_matches_dense_oracle():
    from rydcryst.lattice.ed import build_sector_hamiltonian
    from rydcryst.lattice.model import LatticeModel

    rng = np.random.default_rng(42)
    for _ in range(8):
        L = int(rng.integers(4, 7))
        n_max = int(rng.integers(1, 4))
        N = int(rng.integers(1, min(L * n_max, 5) + 1))
        boundary = "periodic" if rng.random() < 0.5 else "open"
        table = random_table(rng, L, boundary)
        m = LatticeModel(n_sites=L, dx=0.5, hop=float(rng.uniform(0.5, 2.0)),
                         interaction_table=table, boundary=boundary,
                         n_max=n_max, n_particles=N)
        h, _ = build_sector_hamiltonian(m)
        h = h.toarray()
        h_ref, states_ref = dense_sector_hamiltonian(
            L, m.hop, table, boundary, n_max, N
        )
        # align the two basis orders before comparing
        mine = [tuple(int(x) for x in s) for s in sector_states(L, N, n_max)]
        perm = [states_ref.index(s) for s in mine]
        h_ref = h_ref[np.ix_(perm, perm)]
        assert np.max(np.abs(h - h_ref)) < 1e-12 * max(1.0, np.max(np.abs(h_ref)))


def test_ground_state_matches_dense_oracle():
    rng = np.random.default_rng(7)
    for _ in range(5):
        L = int(rng.integers(4, 7))
        n_max = int(rng.integers(1, 3))
        N = int(rng.integers(1, 4))
        boundary = "periodic" if rng.random() < 0.5 else "open"
        m = build_lattice(rho0=1.0, mass=1.0, c6=float(rng.uniform(0.1, 1.0)),
                          n_sites=L, dx=0.5, a_cut=0.4, n_max=n_max,
                          boundary=boundary, n_particles=N)
        e, psi, states, info = ed_ground_state(m)
        e_ref, psi_ref, states_ref = dense_sector_ground_state(
            L, m.hop, m.interaction_table, boundary, n_max, N
        )
        assert e == pytest.approx(e_ref, abs=1e-10 * max(1.0, abs(e_ref)))


def test_ed_nn_matrix_matches_dense_oracle():
    m = build_lattice(rho0=1.0, mass=1.0, c6=0.6, n_sites=6, dx=0.5,
                      a_cut=0.4, n_max=2, n_particles=3)
    e, psi, states, info = ed_ground_state(m)
    nn, dens = ed_nn_matrix(psi, states)
    order = [tuple(int(x) for x in s) for s in states]
    nn_ref, dens_ref = dense_nn_correlation(np.asarray(psi), order, 6)
    # the oracle keeps <n_i^2> on the nn diagonal; the library reports it too
    assert np.max(np.abs(nn - nn_ref)) < 1e-10
    assert np.max(np.abs(dens - dens_ref)) < 1e-10


def test_hard_core_chain_is_free_fermions():
    # Jordan-Wigner: open-chain hard-core bosons share the fermion spectrum
    m = build_lattice(rho0=1.0, mass=1.0, c6=0.0, n_sites=10, dx=0.5,
                      n_max=1, n_particles=4)
    e, *_ = ed_ground_state(m)
    assert e == pytest.approx(free_fermion_energy(10, 4, hop=m.hop), rel=1e-12)


def test_hard_core_ring_odd_number_is_free_fermions():
    # on a ring the map twists the boundary by (-1)^(N-1); odd N matches
    # the periodic fermion filling directly
    m = build_lattice(rho0=1.0, mass=1.0, c6=0.0, n_sites=10, dx=0.5,
                      n_max=1, boundary="periodic", n_particles=3)
    e, *_ = ed_ground_state(m)
    assert e == pytest.approx(
        free_fermion_energy(10, 3, hop=m.hop, periodic=True), rel=1e-12
    )


def test_iterative_branch_agrees_with_dense():
    # C(12, 4) = 495 sits above the dense cutoff and exercises eigsh
    m = build_lattice(rho0=1.0, mass=1.0, c6=0.4, n_sites=12, dx=0.5,
                      a_cut=0.4, n_max=1, n_particles=4)
    e, psi, states, info = ed_ground_state(m)
    assert info["dim"] == 495
    assert info["solver"] == "lanczos"
    e_ref, *_ = dense_sector_ground_state(
        12, m.hop, m.interaction_table, "open", 1, 4
    )
    assert e == pytest.approx(e_ref, abs=1e-8 * abs(e_ref))


def test_dimension_guard():
    m = build_lattice(rho0=1.0, mass=1.0, c6=1.0, n_sites=40, dx=0.5,
                      n_particles=20)
    with pytest.raises(SolverError, match="dimension"):
        ed_ground_state(m, dim_limit=1000)


def test_ed_is_deterministic_across_seeds_for_gapped_case():
    m = build_lattice(rho0=1.0, mass=1.0, c6=0.4, n_sites=12, dx=0.5,
                      a_cut=0.4, n_max=1, n_particles=4)
    e1, *_ = ed_ground_state(m, seed=1)
    e2, *_ = ed_ground_state(m, seed=99)
    assert e1 == pytest.approx(e2, rel=1e-11)
