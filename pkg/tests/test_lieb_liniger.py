"""Contact-gas integral equation: energies and the K(gamma) map."""

import math

import numpy as np
import pytest

from rydcryst.lattice import TONKS_E, lieb_liniger_e, lieb_liniger_k
from rydcryst import ParameterError


def test_tonks_limit_energy():
    # e(gamma) -> pi^2/3 (1 - 4/gamma + 12/gamma^2 - ...) for large gamma
    for gamma in (200.0, 1000.0, 5000.0):
        e, info = lieb_liniger_e(gamma)
        ref = TONKS_E * (1.0 - 4.0 / gamma + 12.0 / gamma**2)
        assert e == pytest.approx(ref, rel=50.0 / gamma**3)
        assert info["converged"]


def test_weak_coupling_expansion():
    # e(gamma) = gamma - 4 gamma^(3/2) / (3 pi) + O(gamma^2)
    gamma = 1e-3
    e, info = lieb_liniger_e(gamma)
    ref = gamma - 4.0 * gamma**1.5 / (3.0 * math.pi)
    assert e == pytest.approx(ref, rel=5e-3)
    assert info["low_lambda"]


def test_energy_is_monotone_in_gamma():
    gammas = np.geomspace(0.05, 100.0, 12)
    es = [lieb_liniger_e(g)[0] for g in gammas]
    assert np.all(np.diff(es) > 0.0)
    # and bounded by the Tonks value
    assert es[-1] < TONKS_E


def test_node_count_convergence():
    # halving the resolution moves e(gamma) by verifiably little
    gamma = 10.0
    e_ref, _ = lieb_liniger_e(gamma)
    e_coarse, _ = lieb_liniger_e(gamma, n_nodes=64)
    e_fine, _ = lieb_liniger_e(gamma, n_nodes=256)
    assert abs(e_fine - e_ref) <= abs(e_coarse - e_ref) + 1e-12
    assert e_fine == pytest.approx(e_ref, rel=1e-8)


def test_k_tonks_asymptote():
    # K -> 1 + 4/gamma in the impenetrable limit; at gamma = 1000 the
    # value sits within a percent of unity but clearly above it
    k, info = lieb_liniger_k(1000.0)
    assert 1.0 < k < 1.01
    assert k == pytest.approx(1.0 + 4.0 / 1000.0, abs=1e-3)


def test_k_weak_coupling_grows():
    # K ~ pi / sqrt(gamma) as gamma -> 0
    k, info = lieb_liniger_k(0.01)
    assert k == pytest.approx(math.pi / 0.1, rel=0.15)


def test_k_is_monotone_decreasing():
    gammas = [0.1, 0.5, 2.0, 10.0, 50.0]
    ks = [lieb_liniger_k(g)[0] for g in gammas]
    assert np.all(np.diff(ks) < 0.0)


def test_invalid_gamma_rejected():
    with pytest.raises(ParameterError):
        lieb_liniger_e(0.0)
    with pytest.raises(ParameterError):
        lieb_liniger_e(-1.0)
    with pytest.raises(ParameterError):
        lieb_liniger_k(-2.0)
