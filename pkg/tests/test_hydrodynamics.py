import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadfloat import GeneralizedState, VehicleParams
from quadfloat.hydrodynamics import (
    damping_wrench,
    restoring_wrench,
    restoring_wrench_linear,
    restoring_wrench_nonlinear,
)

P = VehicleParams()
vel = st.floats(-10, 10, allow_nan=False)


def test_damping_zero_velocity():
    w = damping_wrench([0, 0, 0], [0, 0, 0], P)
    assert np.all(w.as_vector() == 0.0)


def test_damping_surge():
    w = damping_wrench([1, 0, 0], [0, 0, 0], P)
    np.testing.assert_allclose(w.force, [-1.5, 0, 0])


def test_damping_yaw():
    w = damping_wrench([0, 0, 0], [0, 0, 2], P)
    np.testing.assert_allclose(w.moment, [0, 0, -0.12])


@given(vel, vel, vel, vel, vel, vel)
def test_damping_is_passive(a, b, c, d, e, f):
    nu = np.array([a, b, c, d, e, f])
    w = damping_wrench(nu[:3], nu[3:], P)
    assert nu @ w.as_vector() <= 0.0


def test_restoring_zero_at_equilibrium():
    for fn in (restoring_wrench_linear, restoring_wrench_nonlinear):
        assert np.all(fn(GeneralizedState(), P).as_vector() == 0.0)


def test_heave_restoring_force():
    w = restoring_wrench_nonlinear(GeneralizedState(p=(0, 0, 0.01)), P)
    assert w.force[2] == pytest.approx(-24.525, rel=1e-12)


def test_roll_restoring_at_right_angle():
    p = VehicleParams(nabla=0.0012, GM_T=0.03)
    w = restoring_wrench_nonlinear(GeneralizedState(eta=(math.pi / 2, 0, 0)), p)
    assert w.moment[0] == pytest.approx(-0.35316, rel=1e-12)


def test_linear_small_roll_taylor_remainder():
    s = GeneralizedState(eta=(0.02, 0, 0))
    lin = restoring_wrench_linear(s, P).moment[0]
    non = restoring_wrench_nonlinear(s, P).moment[0]
    assert lin == pytest.approx(-P.roll_stiffness * 0.02, rel=1e-12)
    assert (lin - non) / lin == pytest.approx(1 - math.sin(0.02) / 0.02, rel=1e-6)
    assert abs(lin - non) / abs(lin) == pytest.approx(6.7e-5, rel=0.01)


@given(st.floats(-0.05, 0.05), st.floats(-0.05, 0.05), st.floats(-0.05, 0.05))
def test_linear_matches_nonlinear_small_angles(phi, theta, z):
    s = GeneralizedState(p=(0, 0, z), eta=(phi, theta, 0))
    lin = restoring_wrench_linear(s, P).as_vector()
    non = restoring_wrench_nonlinear(s, P).as_vector()
    np.testing.assert_allclose(lin, non, rtol=5e-4, atol=0)


@given(st.floats(-10, 10, allow_nan=False))
def test_no_yaw_stiffness(psi):
    s = GeneralizedState(eta=(0, 0, psi))
    for mode in ("linear", "nonlinear"):
        assert np.all(restoring_wrench(s, P, mode).as_vector() == 0.0)


def test_no_surge_sway_stiffness():
    w = restoring_wrench_nonlinear(GeneralizedState(p=(3.0, -2.0, 0)), P)
    assert np.all(w.as_vector() == 0.0)


def test_unknown_mode():
    with pytest.raises(ValueError):
        restoring_wrench(GeneralizedState(), P, "quadratic")
