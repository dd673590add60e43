import json
import math

import pytest

from rydcryst import ExperimentalParams, ParameterError
from rydcryst.units import C_LIGHT, from_natural, natural_scales, to_natural


def minimal_kwargs(**overrides):
    kw = dict(
        g_sqrt_n=3.4e10,
        gamma=1.9e7,
        delta_1=1.9e9,
        omega_c=1.1e8,
        q_p=8.1e6,
        rho0=2000.0,
        medium_len=5e-3,
    )
    kw.update(overrides)
    return kw


def test_defaults_and_construction():
    p = ExperimentalParams(**minimal_kwargs())
    assert p.delta_2 == 0.0
    assert p.c6 == 0.0
    assert p.a_cut == 0.0
    assert p.temperature == 0.0
    assert p.c == C_LIGHT


@pytest.mark.parametrize(
    "field", ["g_sqrt_n", "gamma", "omega_c", "c", "q_p", "rho0", "medium_len"]
)
def test_positive_fields_rejected_when_nonpositive(field):
    for bad in (0.0, -1.0):
        with pytest.raises(ParameterError) as exc:
            ExperimentalParams(**minimal_kwargs(**{field: bad}))
        assert field in str(exc.value)


@pytest.mark.parametrize("field", ["c6", "a_cut", "temperature"])
def test_nonnegative_fields_reject_negative(field):
    ExperimentalParams(**minimal_kwargs(**{field: 0.0}))
    with pytest.raises(ParameterError) as exc:
        ExperimentalParams(**minimal_kwargs(**{field: -1e-30}))
    assert field in str(exc.value)


def test_zero_single_photon_detuning_rejected():
    with pytest.raises(ParameterError) as exc:
        ExperimentalParams(**minimal_kwargs(delta_1=0.0))
    assert "delta_1" in str(exc.value)
    # both signs of a finite detuning are fine
    ExperimentalParams(**minimal_kwargs(delta_1=-1.9e9))


def test_two_photon_detuning_may_be_zero_or_negative():
    ExperimentalParams(**minimal_kwargs(delta_2=0.0))
    ExperimentalParams(**minimal_kwargs(delta_2=-3.0e4))


def test_replace_revalidates():
    p = ExperimentalParams(**minimal_kwargs())
    q = p.replace(rho0=1000.0)
    assert q.rho0 == 1000.0
    assert p.rho0 == 2000.0
    with pytest.raises(ParameterError):
        p.replace(gamma=-1.0)


def test_dict_round_trip():
    p = ExperimentalParams(**minimal_kwargs(c6=2e-13, temperature=1e5))
    d = p.to_dict()
    assert ExperimentalParams.from_dict(d) == p


def test_from_dict_rejects_unknown_keys():
    d = ExperimentalParams(**minimal_kwargs()).to_dict()
    d["omega_typo"] = 1.0
    with pytest.raises(ParameterError) as exc:
        ExperimentalParams.from_dict(d)
    assert "omega_typo" in str(exc.value)


def test_json_file_round_trip(tmp_path):
    p = ExperimentalParams(**minimal_kwargs(a_cut=1e-4))
    path = tmp_path / "params.json"
    p.to_json_file(path)
    assert ExperimentalParams.from_json_file(path) == p
    # file is plain JSON, editable by hand
    raw = json.loads(path.read_text())
    assert raw["a_cut"] == 1e-4


def test_natural_scales_definitions():
    gamma, l_abs = 1.9e7, 5e-6
    s = natural_scales(gamma, l_abs)
    assert s["frequency"] == gamma
    assert s["length"] == l_abs
    assert math.isclose(s["time"], 1.0 / gamma, rel_tol=1e-15)
    assert math.isclose(s["velocity"], l_abs * gamma, rel_tol=1e-15)
    assert math.isclose(s["mass"], 1.0 / (l_abs**2 * gamma), rel_tol=1e-15)
    assert math.isclose(s["c6"], gamma * l_abs**6, rel_tol=1e-15)
    assert math.isclose(s["density_1d"], 1.0 / l_abs, rel_tol=1e-15)


def test_natural_units_round_trip():
    s = natural_scales(1.9e7, 5e-6)
    for kind in s:
        x = 3.7
        assert math.isclose(from_natural(to_natural(x, kind, s), kind, s), x,
                            rel_tol=1e-15)


def test_natural_scales_reject_nonpositive():
    with pytest.raises(ValueError):
        natural_scales(0.0, 5e-6)
    with pytest.raises(ValueError):
        natural_scales(1.9e7, -1.0)
