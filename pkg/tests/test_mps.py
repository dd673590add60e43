"""MPS bookkeeping: canonical forms, densities, and exact contractions."""

import numpy as np
import pytest

from rydcryst import ParameterError
from rydcryst.lattice import build_lattice, build_mpo
from rydcryst.lattice.mps import (
    MPSState,
    expectation_mpo,
    product_state,
    spread_occupations,
)


def random_mps(rng, n_sites, phys_dim, chi):
    tensors = []
    left = 1
    for i in range(n_sites):
        right = 1 if i == n_sites - 1 else chi
        tensors.append(rng.standard_normal((left, phys_dim, right)))
        left = right
    return MPSState(tensors, ["C"] + ["R"] * (n_sites - 1))


def mps_to_dense(psi):
    """Contract the train into a flat state vector (small systems only)."""
    vec = psi.tensors[0]
    for t in psi.tensors[1:]:
        vec = np.tensordot(vec, t, axes=(vec.ndim - 1, 0))
    return vec.reshape(-1)


def test_product_state_occupations_and_norm():
    occ = [2, 0, 1, 3]
    psi = product_state(occ, phys_dim=4)
    assert psi.norm2() == pytest.approx(1.0)
    assert np.allclose(psi.site_densities(), occ)
    assert psi.total_number() == pytest.approx(6.0)
    assert psi.number_variance(6.0) == pytest.approx(0.0, abs=1e-12)


def test_product_state_rejects_overfull_site():
    with pytest.raises(ParameterError):
        product_state([1, 4], phys_dim=4)


def test_spread_occupations_is_even_and_capped():
    occ = spread_occupations(10, 4, n_max=1)
    assert sum(occ) == 4
    assert max(occ) <= 1
    # particles sit away from the edges rather than clumping
    idx = [i for i, o in enumerate(occ) if o]
    gaps = np.diff(idx)
    assert gaps.max() - gaps.min() <= 1
    occ2 = spread_occupations(4, 7, n_max=2)
    assert sum(occ2) == 7
    assert max(occ2) <= 2


def test_canonicalize_preserves_vector_and_sets_flags():
    rng = np.random.default_rng(5)
    psi = random_mps(rng, 6, 3, 5)
    ref = mps_to_dense(psi)
    for center in (0, 3, 5):
        psi.canonicalize(center)
        assert psi.canonical_flags[center] == "C"
        assert psi.canonical_flags[:center] == ["L"] * center
        assert psi.canonical_flags[center + 1:] == ["R"] * (5 - center)
        vec = mps_to_dense(psi)
        # canonicalization is exact up to roundoff
        assert np.max(np.abs(vec - ref)) < 1e-12 * np.max(np.abs(ref))


def test_left_blocks_are_isometries_after_canonicalize():
    rng = np.random.default_rng(8)
    psi = random_mps(rng, 5, 2, 4)
    psi.canonicalize(4)
    for i in range(4):
        a = psi.tensors[i]
        m = a.reshape(-1, a.shape[2])
        assert np.allclose(m.T @ m, np.eye(a.shape[2]), atol=1e-12)


def test_norm2_matches_dense():
    rng = np.random.default_rng(12)
    psi = random_mps(rng, 6, 2, 6)
    dense = mps_to_dense(psi)
    assert psi.norm2() == pytest.approx(float(dense @ dense), rel=1e-12)


def test_site_densities_and_nn_match_dense():
    rng = np.random.default_rng(17)
    L, d = 5, 3
    psi = random_mps(rng, L, d, 4)
    dense = mps_to_dense(psi)
    w = dense**2 / (dense @ dense)
    # per-site occupation of each basis state, site 0 most significant
    idx = np.arange(d**L)
    occ = np.array([(idx // d ** (L - 1 - i)) % d for i in range(L)], dtype=float)
    dens_ref = occ @ w
    assert np.allclose(psi.site_densities(), dens_ref, atol=1e-12)
    nn = psi.two_point_nn()
    for i in range(L):
        for j in range(L):
            ref = float((occ[i] * occ[j]) @ w)
            assert nn[i, j] == pytest.approx(ref, abs=1e-11)


def test_total_number_and_variance_match_dense():
    rng = np.random.default_rng(23)
    L, d = 5, 2
    psi = random_mps(rng, L, d, 5)
    dense = mps_to_dense(psi)
    w = dense**2 / (dense @ dense)
    idx = np.arange(d**L)
    occ = np.array([(idx // d ** (L - 1 - i)) % d for i in range(L)], dtype=float)
    ntot = occ.sum(axis=0)
    mean = float(ntot @ w)
    assert psi.total_number() == pytest.approx(mean, abs=1e-12)
    target = 2.0
    ref = float(((ntot - target) ** 2) @ w)
    assert psi.number_variance(target) == pytest.approx(ref, abs=1e-11)


def test_expectation_mpo_matches_dense_quadratic_form():
    m = build_lattice(rho0=1.0, mass=1.0, c6=0.8, n_sites=5, dx=0.5,
                      a_cut=0.4, n_max=2, n_particles=2)
    h = build_mpo(m).dense_hamiltonian()
    rng = np.random.default_rng(31)
    psi = random_mps(rng, 5, 3, 4)
    dense = mps_to_dense(psi)
    ref = float(dense @ h @ dense) / float(dense @ dense)
    assert expectation_mpo(psi, build_mpo(m)) == pytest.approx(ref, rel=1e-11)
