import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aerial_contact.controller import (
    ActuatorLimits,
    ContactReference,
    ControllerGains,
    OutputSetpoint,
    QuinticProfile,
    ReferenceConfig,
    SingularDecouplingError,
    apply_limits,
    decoupling_matrix,
    drift_acceleration,
    feedback_linearize,
    outer_loop,
    rate_limited_profile,
    setpoint_from_force,
)
from aerial_contact.plant import (
    ContactParams,
    PlantState,
    ThrustCommand,
    VehicleParams,
    contact_force,
    drift,
    force_observer,
    rk4_step,
    state_derivative,
)

P = VehicleParams()
C = ContactParams()
G = ControllerGains()
LIM = ActuatorLimits()


def test_decoupling_matrix_examples():
    assert np.linalg.det(decoupling_matrix(0.0, P)) == 0.0
    assert np.linalg.det(decoupling_matrix(math.pi / 2, P)) == pytest.approx(4.767, abs=1e-3)
    assert np.linalg.det(decoupling_matrix(math.pi / 2, P)) == pytest.approx(0.65 / (2.727 * 0.05))


@given(st.floats(-1.5, 1.5), st.floats(0, 30))
def test_second_row_annihilates_equal_thrust(theta, T):
    assert abs((decoupling_matrix(theta, P) @ [T, T])[1]) <= 1e-12 * max(T, 1.0)


def test_decoupling_matrix_matches_plant_finite_difference():
    rng = np.random.default_rng(1)
    h = 1e-3
    for _ in range(100):
        s = PlantState(rng.uniform(-0.2, 0.1), rng.uniform(-1, 1), rng.uniform(-1.2, 1.2), rng.uniform(-2, 2))
        u = rng.uniform(0, 21, 2)
        J = np.empty((2, 2))
        for j in range(2):
            e = np.zeros(2)
            e[j] = h
            fp = state_derivative(s, ThrustCommand(*(u + e)), P, C)[[1, 3]]
            fm = state_derivative(s, ThrustCommand(*(u - e)), P, C)[[1, 3]]
            J[:, j] = (fp - fm) / (2 * h)
        A = decoupling_matrix(s.theta, P)
        np.testing.assert_allclose(J, A, rtol=1e-8, atol=1e-8 * np.abs(A).max())


def test_drift_acceleration_examples():
    assert np.array_equal(drift_acceleration(0.0, P), [0.0, 0.0])
    assert drift_acceleration(8.5, P)[0] == pytest.approx(-3.1170, abs=1e-4)


@given(st.floats(0, 50))
def test_drift_acceleration_shares_plant_formula(F):
    np.testing.assert_array_equal(drift_acceleration(F, P), drift(PlantState(), F, P)[[1, 3]])


def test_outer_loop_examples():
    sp = OutputSetpoint(x_des=0.1, theta_des=0.2)
    assert np.array_equal(outer_loop(sp, PlantState(x=0.1, theta=0.2), G), [0.0, 0.0])
    v = outer_loop(OutputSetpoint(x_des=0.1), PlantState(), G)
    assert v[0] == pytest.approx(0.4)
    sp = OutputSetpoint(x_ddot_des=1.0, x_dot_des=0.5, theta_ddot_des=-2.0, theta_dot_des=0.1)
    np.testing.assert_allclose(outer_loop(sp, PlantState(), G), [1.0 + 4 * 0.5, -2.0 + 10 * 0.1])


def test_feedback_linearize_examples():
    b = drift_acceleration(3.0, P)
    u = feedback_linearize(b, 0.2, 3.0, P)
    assert u.T1 == pytest.approx(0.0, abs=1e-12) and u.T2 == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(SingularDecouplingError):
        feedback_linearize([0.0, 0.0], 0.01, 0.0, P, eps_sing=0.02)
    with pytest.raises(SingularDecouplingError):
        feedback_linearize([0.0, 0.0], -0.01, 0.0, P, eps_sing=0.02)


def test_exact_linearization_round_trip():
    rng = np.random.default_rng(2)
    for _ in range(500):
        s = PlantState(rng.uniform(-0.14, 0.05), rng.uniform(-0.5, 0.5), rng.uniform(0.05, 1.0), rng.uniform(-2, 2))
        v = rng.uniform(-3, 3, 2)
        u = feedback_linearize(v, s.theta, contact_force(s, C), P)
        acc = state_derivative(s, u, P, C)[[1, 3]]
        np.testing.assert_allclose(acc, v, atol=1e-9)


@given(st.floats(0.05, 1.4), st.floats(0, 20), st.floats(-5, 5), st.floats(-50, 50))
def test_differential_part_is_odd(theta, F, v1, w):
    b1, b2 = drift_acceleration(F, P)
    plus = feedback_linearize([v1, b2 + w], theta, F, P)
    minus = feedback_linearize([v1, b2 - w], theta, F, P)
    assert plus.T1 == pytest.approx(minus.T2, abs=1e-9)
    assert plus.T2 == pytest.approx(minus.T1, abs=1e-9)


def test_setpoint_from_force_examples():
    assert setpoint_from_force(0.0, P) == 0.0
    assert setpoint_from_force(8.5, P) == pytest.approx(0.30766, abs=5e-5)
    assert setpoint_from_force(8.5, P) == pytest.approx(math.atan(8.5 / (2.727 * 9.81)), rel=1e-15)
    with pytest.raises(ValueError):
        setpoint_from_force(-1.0, P)


@given(st.floats(0, 100))
def test_setpoint_observer_round_trip(F):
    assert force_observer(setpoint_from_force(F, P), 0.0, P) == pytest.approx(F, rel=1e-12, abs=1e-12)


def test_apply_limits_examples():
    u, flags = apply_limits(ThrustCommand(10, 12), ThrustCommand(10, 12), 0.001, LIM)
    assert u == ThrustCommand(10, 12) and not flags
    u, flags = apply_limits(ThrustCommand(30, 5), None, 0.001, LIM)
    assert u == ThrustCommand(21, 5) and flags == {"T1_SAT"}
    u, flags = apply_limits(ThrustCommand(20, 10), ThrustCommand(10, 10), 0.001, LIM)
    assert u.T1 == pytest.approx(10.05) and u.T2 == 10 and flags == {"T1_SLEW"}
    u, flags = apply_limits(ThrustCommand(-3, 10), None, 0.001, LIM)
    assert u.T1 == 0.0 and flags == {"T1_SAT"}
    with pytest.raises(ValueError):
        apply_limits(ThrustCommand(1, 1), None, 0.0, LIM)


@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(0, 21), st.floats(0, 21))
def test_limiter_output_within_bounds(r1, r2, p1, p2):
    u, flags = apply_limits(ThrustCommand(r1, r2), ThrustCommand(p1, p2), 0.001, LIM)
    for value, prev in ((u.T1, p1), (u.T2, p2)):
        assert LIM.T_min - 1e-12 <= value <= LIM.T_max + 1e-12 or abs(value - prev) <= 0.05 + 1e-12
        assert abs(value - prev) <= LIM.slew_max * 0.001 + 1e-12
    if not flags:
        assert (u.T1, u.T2) == (r1, r2)


def _analytic_error(e0, de0, kp, kd, t):
    # ë + kd ė + kp e = 0, distinct or repeated roots
    disc = kd * kd - 4 * kp
    if abs(disc) < 1e-12:
        r = -kd / 2
        return (e0 + (de0 - r * e0) * t) * np.exp(r * t)
    roots = np.roots([1, kd, kp]).astype(complex)
    A = np.array([[1, 1], roots])
    c = np.linalg.solve(A, [e0, de0])
    return np.real(c[0] * np.exp(roots[0] * t) + c[1] * np.exp(roots[1] * t))


@pytest.mark.parametrize(
    "gains, dt",
    [(G, 1e-3), (ControllerGains(kp1=9.0, kp2=30.0, kd1=2.0, kd2=6.0), 2.5e-4)],
)
def test_closed_loop_error_matches_second_order_solution(gains, dt):
    # unsaturated step setpoint; zero-order hold lag shrinks with dt
    n = int(round(1.0 / dt))
    target = OutputSetpoint(x_des=0.0, theta_des=0.3)
    s = PlantState(x=-0.02, x_dot=0.01, theta=0.28, theta_dot=0.05)
    e0 = (s.x - 0.0, s.x_dot, s.theta - 0.3, s.theta_dot)
    t = np.arange(n + 1) * dt
    ex, eth = [s.x], [s.theta - 0.3]
    for _ in range(n):
        v = outer_loop(target, s, gains)
        u = feedback_linearize(v, s.theta, contact_force(s, C), P)
        s = rk4_step(s, u, dt, P, C)
        ex.append(s.x)
        eth.append(s.theta - 0.3)
    np.testing.assert_allclose(ex, _analytic_error(e0[0], e0[1], gains.kp1, gains.kd1, t), atol=1e-4)
    np.testing.assert_allclose(eth, _analytic_error(e0[2], e0[3], gains.kp2, gains.kd2, t), atol=1e-4)


def test_quintic_profile_boundary_conditions():
    q = QuinticProfile(0.1, 1.0, 0.3, 0.4)
    assert q(0.0) == pytest.approx((0.1, 1.0, 0.0))
    p, v, a = q(0.4 - 1e-12)
    assert (p, v, a) == pytest.approx((0.3, 0.0, 0.0), abs=1e-9)
    assert q(1.0) == (0.3, 0.0, 0.0)
    with pytest.raises(ValueError):
        QuinticProfile(0, 0, 1, 0.0)


def test_quintic_derivatives_consistent():
    q = QuinticProfile(-0.1, 0.2, 0.0, 0.85)
    h = 1e-6
    for t in np.linspace(0.05, 0.8, 10):
        assert q(t)[1] == pytest.approx((q(t + h)[0] - q(t - h)[0]) / (2 * h), abs=1e-6)
        assert q(t)[2] == pytest.approx((q(t + h)[1] - q(t - h)[1]) / (2 * h), abs=1e-5)


def test_rate_limited_profile_respects_limit():
    fast = QuinticProfile(0.0, 0.0, 1.0, 0.2)
    assert fast.peak_rate() > 2.0
    slow = rate_limited_profile(0.0, 0.0, 1.0, 0.2, 2.0)
    assert slow.peak_rate() <= 2.0
    assert slow.duration > 0.2


def test_contact_reference_modes():
    entry = PlantState(-0.1, 0.0, 0.1, 1.0)
    step = ContactReference(entry, 0.0, 0.3, ReferenceConfig(mode="step"))
    assert step(0.0) == OutputSetpoint(x_des=0.0, theta_des=0.3)
    ref = ContactReference(entry, 0.0, 0.3, ReferenceConfig(), LIM.pitch_rate_max)
    start = ref(0.0)
    assert (start.x_des, start.x_dot_des, start.theta_des, start.theta_dot_des) == pytest.approx((-0.1, 0.0, 0.1, 1.0))
    assert ref(10.0) == OutputSetpoint(x_des=0.0, theta_des=0.3)
    with pytest.raises(ValueError):
        ReferenceConfig(mode="ramp")


def test_gain_and_limit_validation():
    with pytest.raises(ValueError):
        ControllerGains(kp1=0.0)
    with pytest.raises(ValueError):
        ActuatorLimits(T_min=5.0, T_max=4.0)
    with pytest.raises(ValueError):
        OutputSetpoint(theta_des=2.0)
