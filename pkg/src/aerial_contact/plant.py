"""Planar contact dynamics of the quadrotor carrying the inspection arm.

The state is ``[x, x_dot, theta, theta_dot]``: horizontal position of the
centre of mass, its velocity, the pitch angle and the pitch rate. The two
rotor thrusts enter affinely,

    d/dt state = drift(state, F_H) + input_matrix(state) @ [T1, T2]

where ``F_H`` is the horizontal contact force pushing the vehicle back from
the surface. The vertical axis is treated as static and is not integrated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ModelValidityError(ValueError):
    """Raised when the planar model is evaluated outside its domain."""


@dataclass(frozen=True)
class PlantState:
    x: float = 0.0
    x_dot: float = 0.0
    theta: float = 0.0
    theta_dot: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.x_dot, self.theta, self.theta_dot])

    @classmethod
    def from_array(cls, values) -> "PlantState":
        x, x_dot, theta, theta_dot = (float(v) for v in values)
        return cls(x, x_dot, theta, theta_dot)


@dataclass(frozen=True)
class ThrustCommand:
    T1: float
    T2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.T1, self.T2])

    @property
    def total(self) -> float:
        return self.T1 + self.T2


@dataclass(frozen=True)
class VehicleParams:
    """Rigid-body constants of the vehicle + manipulator.

    Defaults: 2.4 kg platform plus the 0.327 kg arm. ``L``, ``l_H`` and
    ``I_yy`` are estimates for this airframe class.
    """

    M: float = 2.727
    g: float = 9.81
    L: float = 0.65
    l_H: float = 0.25
    I_yy: float = 0.05

    def __post_init__(self):
        for name in ("M", "g", "L", "I_yy"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"VehicleParams.{name} must be finite and > 0, got {value!r}")
        if not math.isfinite(self.l_H):
            raise ValueError(f"VehicleParams.l_H must be finite, got {self.l_H!r}")


@dataclass(frozen=True)
class ContactParams:
    """Lumped spring-damper model of the compliant end-effector.

    ``k_c`` and ``x_s`` are calibrated so the force is 2.5 N at x = -0.1 m
    and 8.5 N at x = 0 (static).
    """

    k_c: float = 60.0
    c_c: float = 2.0
    x_s: float = -0.141667
    mu: float = 0.3
    l_v: float = 0.20

    def __post_init__(self):
        if not (math.isfinite(self.k_c) and self.k_c > 0):
            raise ValueError(f"ContactParams.k_c must be > 0, got {self.k_c!r}")
        if not (math.isfinite(self.c_c) and self.c_c >= 0):
            raise ValueError(f"ContactParams.c_c must be >= 0, got {self.c_c!r}")
        if not (math.isfinite(self.mu) and self.mu >= 0):
            raise ValueError(f"ContactParams.mu must be >= 0, got {self.mu!r}")
        for name in ("x_s", "l_v"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"ContactParams.{name} must be finite")


def check_state(state: PlantState) -> None:
    """Raise ModelValidityError unless the state is finite with |theta| < pi/2."""
    values = (state.x, state.x_dot, state.theta, state.theta_dot)
    if not all(math.isfinite(v) for v in values):
        raise ModelValidityError(f"non-finite plant state {state}")
    if abs(state.theta) >= math.pi / 2:
        raise ModelValidityError(f"pitch {state.theta:.6g} rad outside (-pi/2, pi/2)")


def drift(state: PlantState, F_H: float, params: VehicleParams) -> np.ndarray:
    """Input-free part of the dynamics: ``[x_dot, -F_H/M, theta_dot, F_H*l_H/I_yy]``."""
    if not (math.isfinite(F_H) and math.isfinite(state.x_dot) and math.isfinite(state.theta_dot)):
        raise ModelValidityError("non-finite input to drift")
    return np.array(
        [
            state.x_dot,
            -F_H / params.M,
            state.theta_dot,
            F_H * params.l_H / params.I_yy,
        ]
    )


def input_matrix(state: PlantState, params: VehicleParams) -> np.ndarray:
    """4x2 matrix mapping ``[T1, T2]`` to the state derivative."""
    if not math.isfinite(state.theta):
        raise ModelValidityError("non-finite pitch in input_matrix")
    s = math.sin(state.theta) / params.M
    r = params.L / (2.0 * params.I_yy)
    return np.array([[0.0, 0.0], [s, s], [0.0, 0.0], [-r, r]])


def contact_force(state: PlantState, contact: ContactParams) -> float:
    """Unilateral spring-damper force; never negative."""
    return max(0.0, contact.k_c * (state.x - contact.x_s) + contact.c_c * state.x_dot)


def state_derivative(
    state: PlantState,
    u: ThrustCommand,
    params: VehicleParams,
    contact: ContactParams,
) -> np.ndarray:
    check_state(state)
    F_H = contact_force(state, contact)
    return drift(state, F_H, params) + input_matrix(state, params) @ u.as_array()


def _derivative_array(y: np.ndarray, u: ThrustCommand, params, contact) -> np.ndarray:
    return state_derivative(PlantState.from_array(y), u, params, contact)


def rk4_step(
    state: PlantState,
    u: ThrustCommand,
    dt: float,
    params: VehicleParams,
    contact: ContactParams,
) -> PlantState:
    """Advance one classical RK4 step with ``u`` held over the interval."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    y = state.as_array()
    k1 = _derivative_array(y, u, params, contact)
    k2 = _derivative_array(y + 0.5 * dt * k1, u, params, contact)
    k3 = _derivative_array(y + 0.5 * dt * k2, u, params, contact)
    k4 = _derivative_array(y + dt * k3, u, params, contact)
    new = PlantState.from_array(y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
    check_state(new)
    return new


def force_observer(theta: float, x_ddot: float, params: VehicleParams) -> float:
    """Contact force implied by pitch and horizontal acceleration.

    Assumes the collective thrust balances gravity vertically, so
    ``F_H = M g tan(theta) - M x_ddot``.
    """
    if not math.isfinite(theta) or abs(theta) >= math.pi / 2:
        raise ModelValidityError(f"force observer undefined at theta={theta!r}")
    return params.M * params.g * math.tan(theta) - params.M * x_ddot
