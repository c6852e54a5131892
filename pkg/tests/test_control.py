import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadfloat import GeneralizedState, VehicleParams
from quadfloat.actuation import thrust_to_inertial
from quadfloat.control import (
    ControllerState,
    PiGains,
    PiState,
    ReferenceSignal,
    SurfaceController,
    pi_step,
    reference_psi_staircase,
    reference_y_step,
    surface_controller,
)

P = VehicleParams()
G = PiGains(kp=0.12, ki=0.01)
ZERO = ReferenceSignal.constant(0.0)


def run_pi(gains, error, n, dt):
    s, u = PiState(), 0.0
    for _ in range(n):
        u, s = pi_step(gains, s, error, dt)
    return u, s


def test_zero_error_zero_command():
    u, s = run_pi(G, 0.0, 100, 0.01)
    assert u == 0.0 and s.integral == 0.0


@given(st.floats(-10, 10, allow_nan=False))
def test_pure_proportional(e):
    u, _ = pi_step(PiGains(kp=0.7, ki=0.0), PiState(), e, 0.01)
    assert u == 0.7 * e


def test_integral_of_constant_error():
    dt, T, e = 0.01, 2.0, 0.3
    gains = PiGains(kp=0.0, ki=0.5, integrator_limit=10.0)
    u, _ = run_pi(gains, e, int(round(T / dt)), dt)
    assert abs(u - 0.5 * e * T) <= 0.5 * e * dt + 1e-12


def test_anti_windup_clamp():
    gains = PiGains(kp=0.0, ki=1.0, integrator_limit=0.2)
    u, s = run_pi(gains, 5.0, 1000, 0.01)
    assert s.integral == 0.2 and u == pytest.approx(0.2)
    # recovers as soon as the error changes sign
    u, s = pi_step(gains, s, -5.0, 0.01)
    assert s.integral == pytest.approx(0.15)


def test_pi_rejects_bad_inputs():
    with pytest.raises(ValueError):
        PiGains(kp=-1.0)
    with pytest.raises(ValueError):
        pi_step(G, PiState(), 1.0, 0.0)


def test_y_step_reference():
    r = reference_y_step(1.0)
    assert r(0.5) == 0.0 and r(1.5) == 0.1 and r(100.0) == 0.1
    flat = reference_y_step(1.0, height=0.0)
    assert all(flat(t) == 0.0 for t in (0.0, 1.0, 50.0))


def test_psi_staircase_reference():
    r = reference_psi_staircase()
    assert r(3) == 0.0
    assert r(7) == pytest.approx(0.1745)
    assert r(12) == pytest.approx(0.3490)
    assert r(5.0) == pytest.approx(0.1745)  # right-continuous at the switch


def test_reference_validation():
    with pytest.raises(ValueError):
        ReferenceSignal((2.0, 1.0), (0.1, 0.2))
    with pytest.raises(ValueError):
        ReferenceSignal((1.0,), ())


def call(state, refs, gx=G, gy=G, gpsi=G):
    return surface_controller(state, refs, gx, gy, gpsi, ControllerState(), 0.002, P)


def test_at_reference_zero_torque():
    w, _, sat = call(GeneralizedState(), (ZERO, ZERO, ZERO))
    assert w.tau == (0.0, 0.0, 0.0)
    assert w.T_tot == pytest.approx(2.0)
    assert not sat


def test_y_error_rolls_toward_target():
    gy = PiGains(kp=0.2, ki=0.0)
    w, _, _ = call(GeneralizedState(), (ZERO, ReferenceSignal.constant(0.1), ZERO), gy=gy)
    assert w.tau[0] == pytest.approx(-0.2 * 0.1)
    # negative roll torque -> negative roll -> thrust pushes toward +y
    assert thrust_to_inertial(w, [-0.05, 0, 0])[1] > 0


def test_x_error_pitches_toward_target():
    gx = PiGains(kp=0.2, ki=0.0)
    w, _, _ = call(GeneralizedState(), (ReferenceSignal.constant(0.1), ZERO, ZERO), gx=gx)
    assert w.tau[1] == pytest.approx(0.2 * 0.1)
    assert thrust_to_inertial(w, [0, 0.05, 0])[0] > 0


def test_heading_step_instant():
    gpsi = PiGains(kp=0.13, ki=0.05)
    state = GeneralizedState(t=5.0)
    w, new, _ = call(state, (ZERO, ZERO, reference_psi_staircase()), gpsi=gpsi)
    # integrator starts empty, so only one dt of integral is added
    assert w.tau[2] == pytest.approx(0.13 * 0.1745 + 0.05 * 0.1745 * 0.002)
    assert w.tau[0] == 0.0 and w.tau[1] == 0.0
    assert new.psi.integral == pytest.approx(0.1745 * 0.002)


def test_saturation_clips_wrench():
    big = PiGains(kp=100.0, ki=0.0)
    w, _, sat = call(GeneralizedState(), (ZERO, ReferenceSignal.constant(1.0), ZERO), gy=big)
    assert sat
    assert abs(w.tau[0]) < 100.0


def test_controller_wrapper_counts_and_resets():
    ctrl = SurfaceController(P, G, PiGains(kp=100.0), G, ref_y=ReferenceSignal.constant(1.0))
    ctrl.command(0.0, GeneralizedState(), 0.01)
    assert ctrl.saturation_count == 1
    assert ctrl.max_integral == pytest.approx(0.01)
    ctrl.reset()
    assert ctrl.saturation_count == 0 and ctrl.state == ControllerState()


def test_controller_rejects_bad_bias():
    with pytest.raises(ValueError):
        SurfaceController(P, G, G, G, thrust_bias=0.0)
