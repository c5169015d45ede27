"""Input-output linearizing PD controller for the contact phase.

Outputs are ``h = [x, theta]``. Both have relative degree two, so

    h_ddot = drift_acceleration(F_H) + decoupling_matrix(theta) @ u

and choosing ``u = decoupling_matrix^-1 (v - drift_acceleration)`` makes the
outputs follow ``h_ddot = v`` exactly, with ``v`` a PD law plus reference
feedforward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .plant import PlantState, ThrustCommand, VehicleParams


class SingularDecouplingError(ArithmeticError):
    """The decoupling matrix is too close to singular (pitch near zero)."""


@dataclass(frozen=True)
class OutputSetpoint:
    x_des: float = 0.0
    x_dot_des: float = 0.0
    x_ddot_des: float = 0.0
    theta_des: float = 0.0
    theta_dot_des: float = 0.0
    theta_ddot_des: float = 0.0

    def __post_init__(self):
        values = (
            self.x_des, self.x_dot_des, self.x_ddot_des,
            self.theta_des, self.theta_dot_des, self.theta_ddot_des,
        )
        if not all(math.isfinite(v) for v in values):
            raise ValueError("setpoint entries must be finite")
        if abs(self.theta_des) >= math.pi / 2:
            raise ValueError(f"theta_des {self.theta_des!r} outside (-pi/2, pi/2)")


@dataclass(frozen=True)
class ControllerGains:
    """PD gains per output: index 1 is x, index 2 is theta."""

    kp1: float = 4.0
    kp2: float = 25.0
    kd1: float = 4.0
    kd2: float = 10.0

    def __post_init__(self):
        for name in ("kp1", "kp2", "kd1", "kd2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"ControllerGains.{name} must be > 0, got {value!r}")


@dataclass(frozen=True)
class ActuatorLimits:
    T_min: float = 0.0
    T_max: float = 21.0
    slew_max: float = 50.0
    pitch_rate_max: float = 2.0

    def __post_init__(self):
        if not (0 <= self.T_min < self.T_max):
            raise ValueError(f"need 0 <= T_min < T_max, got {self.T_min!r}, {self.T_max!r}")
        if not self.slew_max > 0:
            raise ValueError(f"slew_max must be > 0, got {self.slew_max!r}")
        if not self.pitch_rate_max > 0:
            raise ValueError(f"pitch_rate_max must be > 0, got {self.pitch_rate_max!r}")


def decoupling_matrix(theta: float, params: VehicleParams) -> np.ndarray:
    """Map from ``[T1, T2]`` to ``[x_ddot, theta_ddot]``.

    Its determinant is ``L sin(theta) / (M I_yy)``, so it is singular at zero
    pitch where thrust has no horizontal component.
    """
    s = math.sin(theta) / params.M
    r = params.L / (2.0 * params.I_yy)
    return np.array([[s, s], [-r, r]])


def drift_acceleration(F_H: float, params: VehicleParams) -> np.ndarray:
    """Output accelerations with zero thrust."""
    return np.array([-F_H / params.M, F_H * params.l_H / params.I_yy])


def outer_loop(setpoint: OutputSetpoint, state: PlantState, gains: ControllerGains) -> np.ndarray:
    v1 = (
        setpoint.x_ddot_des
        + gains.kd1 * (setpoint.x_dot_des - state.x_dot)
        + gains.kp1 * (setpoint.x_des - state.x)
    )
    v2 = (
        setpoint.theta_ddot_des
        + gains.kd2 * (setpoint.theta_dot_des - state.theta_dot)
        + gains.kp2 * (setpoint.theta_des - state.theta)
    )
    return np.array([v1, v2])


def feedback_linearize(
    v,
    theta: float,
    F_H: float,
    params: VehicleParams,
    eps_sing: float = 0.02,
) -> ThrustCommand:
    """Thrusts that make the plant's output accelerations equal ``v``.

    Raises:
        SingularDecouplingError: if ``|sin(theta)| < eps_sing``.
    """
    s = math.sin(theta)
    if abs(s) < eps_sing:
        raise SingularDecouplingError(
            f"|sin(theta)| = {abs(s):.3g} below singularity guard {eps_sing}"
        )
    b1, b2 = drift_acceleration(F_H, params)
    collective = params.M / (2.0 * s) * (v[0] - b1)
    differential = params.I_yy / params.L * (v[1] - b2)
    return ThrustCommand(collective - differential, collective + differential)


def setpoint_from_force(F_des: float, params: VehicleParams) -> float:
    """Pitch that sustains ``F_des`` at rest against the surface."""
    if not F_des >= 0:
        raise ValueError(f"desired force must be non-negative, got {F_des!r}")
    return math.atan(F_des / (params.M * params.g))


LIMIT_FLAGS = ("T1_SAT", "T2_SAT", "T1_SLEW", "T2_SLEW")


def apply_limits(
    raw: ThrustCommand,
    prev: ThrustCommand | None,
    dt: float,
    limits: ActuatorLimits,
) -> tuple[ThrustCommand, frozenset[str]]:
    """Clamp each rotor to its range and to ``prev +/- slew_max*dt``.

    With ``prev=None`` only the range clamp is applied. The returned flags
    name which constraint bound per rotor.
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    flags = set()
    out = []
    step = limits.slew_max * dt
    for i, value in enumerate((raw.T1, raw.T2), start=1):
        clamped = min(max(value, limits.T_min), limits.T_max)
        if clamped != value:
            flags.add(f"T{i}_SAT")
        if prev is not None:
            p = prev.T1 if i == 1 else prev.T2
            slewed = min(max(clamped, p - step), p + step)
            if slewed != clamped:
                flags.add(f"T{i}_SLEW")
            clamped = slewed
        out.append(clamped)
    return ThrustCommand(*out), frozenset(flags)


class QuinticProfile:
    """Rest-to-rest style polynomial from ``(p0, v0, a0)`` to ``(pf, 0, 0)``.

    Holds ``pf`` after ``duration``.
    """

    def __init__(self, p0: float, v0: float, pf: float, duration: float, a0: float = 0.0):
        if not duration > 0:
            raise ValueError(f"duration must be > 0, got {duration!r}")
        T = duration
        A = np.array(
            [[T**3, T**4, T**5], [3 * T**2, 4 * T**3, 5 * T**4], [6 * T, 12 * T**2, 20 * T**3]]
        )
        b = np.array([pf - p0 - v0 * T - 0.5 * a0 * T**2, -v0 - a0 * T, -a0])
        c3, c4, c5 = np.linalg.solve(A, b)
        self.coeffs = (p0, v0, 0.5 * a0, float(c3), float(c4), float(c5))
        self.duration = duration
        self.final = pf

    def __call__(self, t: float) -> tuple[float, float, float]:
        if t >= self.duration:
            return self.final, 0.0, 0.0
        t = max(t, 0.0)
        c0, c1, c2, c3, c4, c5 = self.coeffs
        p = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))))
        v = c1 + t * (2 * c2 + t * (3 * c3 + t * (4 * c4 + t * 5 * c5)))
        a = 2 * c2 + t * (6 * c3 + t * (12 * c4 + t * 20 * c5))
        return p, v, a

    def peak_rate(self, samples: int = 401) -> float:
        ts = np.linspace(0.0, self.duration, samples)
        return max(abs(self(t)[1]) for t in ts)


def rate_limited_profile(
    p0: float, v0: float, pf: float, duration: float, rate_max: float | None
) -> QuinticProfile:
    """Quintic profile, stretched in time until its peak rate is within ``rate_max``.

    The initial rate is a given, so a profile starting above the limit is
    returned once stretching stops reducing the peak.
    """
    profile = QuinticProfile(p0, v0, pf, duration)
    if rate_max is None:
        return profile
    for _ in range(50):
        if profile.peak_rate() <= rate_max or abs(v0) >= rate_max:
            break
        duration *= 1.1
        profile = QuinticProfile(p0, v0, pf, duration)
    return profile


@dataclass(frozen=True)
class ReferenceConfig:
    """How the contact controller moves from the entry state to the targets.

    ``mode="step"`` feeds the final targets directly; ``"quintic"`` blends
    position and pitch references over the given durations.
    """

    mode: str = "quintic"
    x_duration: float = 0.85
    theta_duration: float = 0.4

    def __post_init__(self):
        if self.mode not in ("step", "quintic"):
            raise ValueError(f"reference mode must be 'step' or 'quintic', got {self.mode!r}")
        if not (self.x_duration > 0 and self.theta_duration > 0):
            raise ValueError("reference durations must be > 0")


class ContactReference:
    """Time-indexed OutputSetpoint generator started at contact entry."""

    def __init__(
        self,
        entry: PlantState,
        x_des: float,
        theta_des: float,
        cfg: ReferenceConfig,
        pitch_rate_max: float | None = None,
    ):
        self.x_des = x_des
        self.theta_des = theta_des
        self.mode = cfg.mode
        if cfg.mode == "quintic":
            self._x = QuinticProfile(entry.x, entry.x_dot, x_des, cfg.x_duration)
            self._theta = rate_limited_profile(
                entry.theta, entry.theta_dot, theta_des, cfg.theta_duration, pitch_rate_max
            )

    def __call__(self, t: float) -> OutputSetpoint:
        if self.mode == "step":
            return OutputSetpoint(x_des=self.x_des, theta_des=self.theta_des)
        x, xd, xdd = self._x(t)
        th, thd, thdd = self._theta(t)
        return OutputSetpoint(x, xd, xdd, th, thd, thdd)
