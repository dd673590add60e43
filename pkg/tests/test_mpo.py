"""MPO assembly against dense kron contractions and exact pair sums."""

import math

import numpy as np
import pytest

from rydcryst.lattice import build_contact_lattice, build_lattice, build_mpo
from rydcryst.lattice.mpo import boson_ops, default_penalty, fit_exponential_sum
from rydcryst.lattice.mps import MPSState, expectation_mpo

from oracles import sector_basis


def dense_from_occupation_sums(model):
    """Independent dense H in the full Fock space (not sector-projected)."""
    d = model.phys_dim
    L = model.n_sites
    b, bdag, n = boson_ops(model.n_max)
    dim = d**L
    h = np.zeros((dim, dim))

    def embed(op, site):
        m = np.eye(1)
        for i in range(L):
            m = np.kron(m, op if i == site else np.eye(d))
        return m

    for i in range(L):
        ni = embed(n, i)
        h += 2.0 * model.hop * ni
        h += 0.5 * model.interaction_table[0] * (ni @ ni - ni)
        for j in range(i + 1, L):
            h += model.v_pair(i, j) * ni @ embed(n, j)
    for i, j in model.bonds():
        h += -model.hop * (embed(bdag, j) @ embed(b, i)
                           + embed(bdag, i) @ embed(b, j))
    return h


@pytest.mark.parametrize("boundary", ["open", "periodic"])
@pytest.mark.parametrize("n_max", [1, 2])
def test_dense_contraction_matches_oracle(boundary, n_max):
    m = build_lattice(rho0=1.0, mass=1.0, c6=0.7, n_sites=5, dx=0.5,
                      a_cut=0.4, n_max=n_max, boundary=boundary,
                      n_particles=2)
    h_mpo = build_mpo(m).dense_hamiltonian()
    h_ref = dense_from_occupation_sums(m)
    assert np.max(np.abs(h_mpo - h_ref)) < 1e-12 * max(1.0, np.max(np.abs(h_ref)))


def test_contact_mpo_matches_oracle():
    m = build_contact_lattice(rho0=1.0, mass=1.0, g_contact=2.5, n_sites=4,
                              dx=0.5, n_max=3)
    h_mpo = build_mpo(m).dense_hamiltonian()
    h_ref = dense_from_occupation_sums(m)
    assert np.max(np.abs(h_mpo - h_ref)) < 1e-12 * np.max(np.abs(h_ref))


def test_two_site_ring_has_no_double_bond():
    # L = 2 periodic: the wrap bond coincides with the open bond and must
    # not be counted twice
    m = build_lattice(rho0=1.0, mass=1.0, c6=0.3, n_sites=2, dx=0.5,
                      a_cut=0.4, boundary="periodic", n_particles=1)
    h_mpo = build_mpo(m).dense_hamiltonian()
    h_ref = dense_from_occupation_sums(m)
    assert np.max(np.abs(h_mpo - h_ref)) < 1e-13 * max(1.0, np.max(np.abs(h_ref)))


def test_penalty_vanishes_on_sector_and_shifts_neighbours():
    m = build_lattice(rho0=1.0, mass=1.0, c6=0.5, n_sites=4, dx=0.5,
                      a_cut=0.4, n_max=2, n_particles=2)
    lam = 7.0
    h0 = build_mpo(m).dense_hamiltonian()
    h1 = build_mpo(m, penalty=lam).dense_hamiltonian()
    delta = h1 - h0
    # the difference is diagonal: lam (N - N0)^2
    assert np.max(np.abs(delta - np.diag(np.diag(delta)))) < 1e-12
    occs = [s for s in sector_basis(4, 2, 2)]
    # walk the full Fock diagonal and compare against lam (N - 2)^2
    d = 3
    for idx in range(3**4):
        rem, digits = idx, []
        for _ in range(4):
            digits.append(rem % d)
            rem //= d
        ntot = sum(digits)
        assert delta[idx, idx] == pytest.approx(lam * (ntot - 2) ** 2, abs=1e-10)
    assert occs  # sector really is populated


def test_default_penalty_dominates_local_scales():
    m = build_lattice(rho0=1.0, mass=1.0, c6=0.5, n_sites=10, dx=0.5,
                      a_cut=0.4)
    lam = default_penalty(m)
    assert lam > 4.0 * m.hop
    assert lam > abs(m.interaction_table[0])


def test_fit_exponential_sum_recovers_exact_mixture():
    rng = np.random.default_rng(11)
    for _ in range(5):
        x_true = np.sort(rng.uniform(0.2, 0.95, size=3))
        c_true = rng.uniform(0.5, 2.0, size=3)
        r = np.arange(1, 40)
        v = (c_true[None, :] * x_true[None, :] ** r[:, None]).sum(axis=1)
        c, x, err = fit_exponential_sum(v, tol_rel=1e-9)
        assert err < 1e-9
        fit = (c[None, :] * x[None, :] ** r[:, None]).sum(axis=1)
        assert np.max(np.abs(fit - v) / v) < 1e-9


def test_fit_exponential_sum_respects_r_start():
    x_true, c_true = 0.6, 1.3
    r = np.arange(5, 30)
    v = c_true * x_true**r
    c, x, err = fit_exponential_sum(v, tol_rel=1e-10, r_start=5)
    assert err < 1e-10
    # coefficients come back in the global separation variable
    assert np.max(np.abs(c * x**r - v) / v) < 1e-9


def test_fit_gives_up_on_noise():
    rng = np.random.default_rng(3)
    v = np.abs(rng.standard_normal(24)) + 0.1
    assert fit_exponential_sum(v, tol_rel=1e-12, max_terms=4) is None


def test_long_open_table_switches_to_hybrid():
    c6 = 3.0 / (math.pi**3 / 180.0)
    m = build_lattice(rho0=1.0, mass=1.0, c6=c6, n_sites=60, dx=0.1)
    mpo = build_mpo(m)
    assert mpo.info["interaction_mode"] == "hybrid"
    assert mpo.info["fit_error"] <= 5e-4
    assert mpo.info["bond_dim"] < build_mpo(m, force_direct=True).info["bond_dim"]
    # with a head cutoff the table flattens but the tail still fits
    mc = build_lattice(rho0=1.0, mass=1.0, c6=c6, n_sites=60, dx=0.1,
                       a_cut=0.2, n_max=3)
    assert build_mpo(mc).info["interaction_mode"] == "hybrid"


def test_hybrid_expectation_matches_direct():
    c6 = 3.0 / (math.pi**3 / 180.0)
    m = build_lattice(rho0=1.0, mass=1.0, c6=c6, n_sites=24, dx=0.1,
                      n_particles=2)
    mpo_h = build_mpo(m)
    mpo_d = build_mpo(m, force_direct=True)
    assert mpo_h.info["interaction_mode"] == "hybrid"
    assert mpo_d.info["interaction_mode"] == "direct"
    rng = np.random.default_rng(21)
    for _ in range(4):
        tensors = []
        chi = 1
        for i in range(m.n_sites):
            chi_next = 1 if i == m.n_sites - 1 else 4
            tensors.append(rng.standard_normal((chi, m.phys_dim, chi_next)))
            chi = chi_next
        psi = MPSState(tensors, ["C"] + ["R"] * (m.n_sites - 1))
        eh = expectation_mpo(psi, mpo_h)
        ed = expectation_mpo(psi, mpo_d)
        # short separations are exact in hybrid mode, so the difference is
        # bounded by the tail fit error on much smaller matrix elements
        assert abs(eh - ed) <= 1e-9 * abs(ed)


def test_short_range_and_rings_stay_direct():
    m = build_lattice(rho0=1.0, mass=1.0, c6=1.0, n_sites=10, dx=0.5,
                      a_cut=0.4)
    assert build_mpo(m).info["interaction_mode"] == "direct"
    c6 = 3.0 / (math.pi**3 / 180.0)
    ring = build_lattice(rho0=1.0, mass=1.0, c6=c6, n_sites=60, dx=0.1,
                         boundary="periodic")
    assert build_mpo(ring).info["interaction_mode"] == "direct"


def test_dense_contraction_refuses_large_spaces():
    from rydcryst import ParameterError

    m = build_lattice(rho0=1.0, mass=1.0, c6=1.0, n_sites=16, dx=0.5,
                      n_particles=4)
    with pytest.raises(ParameterError):
        build_mpo(m).dense_hamiltonian()
