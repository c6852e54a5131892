import math

import numpy as np
import pytest

from quadfloat import (
    GeneralizedState,
    InvalidParamsError,
    VehicleParams,
    Wrench,
    equilibrium_state,
    validate_params,
)
from quadfloat.core import params_from_mapping


def test_balanced_params_pass():
    report = validate_params(VehicleParams(m=1.2, rho=1000, g=9.81, nabla=0.0012))
    assert report.ok
    assert report.balance_residual == pytest.approx(0.0, abs=1e-15)


def test_unbalanced_residual():
    report = validate_params(VehicleParams(m=1.2, rho=1000, nabla=0.0010))
    assert not report.ok
    assert report.balance_residual == pytest.approx(0.2 / 1.2, rel=1e-12)
    assert round(report.balance_residual, 4) == 0.1667
    assert any("residual" in f for f in report.failures)


def test_negative_metacentric_height():
    report = validate_params(VehicleParams(GM_T=-0.01))
    assert not report.ok
    assert any("metacentric height must be positive" in f for f in report.failures)
    assert report.checks["GM_T_positive"] is False


@pytest.mark.parametrize("field, value", [
    ("m", 0.0), ("rho", -1.0), ("A_wp", 0.0), ("T_max", 0.0), ("GM_L", 0.0),
    ("I_diag", (0.01, 0.0, 0.02)), ("D_eta_diag", (0.1, -0.1, 0.1)), ("g", math.nan),
])
def test_invalid_fields_rejected(field, value):
    assert not validate_params(VehicleParams(**{field: value})).ok


def test_nabla_derived_from_mass():
    p = VehicleParams(m=2.0, rho=1025.0)
    assert p.nabla == pytest.approx(2.0 / 1025.0)
    assert validate_params(p).ok


def test_stiffness_properties(params):
    assert params.heave_stiffness == pytest.approx(1000 * 9.81 * 0.25)
    assert params.roll_stiffness == pytest.approx(1000 * 9.81 * 0.0012 * 0.03)
    assert params.restoring_diag[[0, 1, 5]].tolist() == [0.0, 0.0, 0.0]


def test_equilibrium_state_is_zero(params):
    s = equilibrium_state(params)
    assert np.all(s.as_vector() == 0.0)


def test_equilibrium_state_rejects_unbalanced():
    with pytest.raises(InvalidParamsError) as info:
        equilibrium_state(VehicleParams(nabla=0.001))
    assert not info.value.report.ok


def test_state_vector_round_trip():
    x = np.arange(12, dtype=float) / 7
    s = GeneralizedState.from_vector(x, t=1.5)
    assert np.array_equal(s.as_vector(), x)
    assert s.t == 1.5


def test_state_rejects_wrong_length():
    with pytest.raises(ValueError):
        GeneralizedState(p=(1.0, 2.0))


def test_wrench_round_trip():
    w = Wrench(3.0, (0.1, -0.2, 0.3))
    assert Wrench.from_vector(w.as_vector()) == w


def test_params_from_mapping_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown vehicle parameter"):
        params_from_mapping({"mass": 1.0})
    assert params_from_mapping({"m": 1.2}).m == 1.2


def test_params_are_frozen(params):
    with pytest.raises(Exception):
        params.m = 2.0
    assert params.replace(m=2.0).m == 2.0
