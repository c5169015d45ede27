"""Free-flight to contact supervisor.

Contact mode is entered when two conditions hold at once: the measured
contact force has engaged a Schmitt trigger, and the vehicle pose lets the
arm reach the inspection point with the required orientation. Losing the
force (trigger disengaged) drops back to free flight.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .kinematics import JointLimits, LinkGeometry, reachable_with_orientation
from .plant import ContactParams, PlantState, ThrustCommand, VehicleParams


class Mode(enum.Enum):
    FREE_FLIGHT = "FreeFlight"
    CONTACT = "Contact"


@dataclass(frozen=True)
class SchmittConfig:
    high: float = 2.5
    low: float = 1.0

    def __post_init__(self):
        if not (0 <= self.low < self.high):
            raise ValueError(f"need 0 <= low < high, got low={self.low!r}, high={self.high!r}")


def schmitt_update(engaged: bool, force: float, cfg: SchmittConfig) -> bool:
    if force >= cfg.high:
        return True
    if force <= cfg.low:
        return False
    return engaged


@dataclass(frozen=True)
class SupervisorState:
    mode: Mode = Mode.FREE_FLIGHT
    engaged: bool = False


def supervisor_step(
    state: SupervisorState, force: float, pose_ok: bool, cfg: SchmittConfig
) -> SupervisorState:
    engaged = schmitt_update(state.engaged, force, cfg)
    mode = state.mode
    if mode is Mode.FREE_FLIGHT and engaged and pose_ok:
        mode = Mode.CONTACT
    elif mode is Mode.CONTACT and not engaged:
        mode = Mode.FREE_FLIGHT
    return SupervisorState(mode, engaged)


@dataclass(frozen=True)
class PoseCheckConfig:
    """Geometry for the pose-readiness test.

    ``mount`` is the arm base in the vehicle body frame (x forward, z up);
    ``target`` is the inspection point in the world frame (x, y, z) with the
    vehicle reference height at z = 0. The end-effector must point along
    world +x, into the surface.
    """

    mount: tuple[float, float] = (0.0, 0.05)
    target: tuple[float, float, float] = (0.525, 0.0, 0.338)
    theta_min: float = 0.05
    theta_max: float = 0.15
    orientation_tol: float = 0.2

    def __post_init__(self):
        if not self.theta_min < self.theta_max:
            raise ValueError("pose window needs theta_min < theta_max")
        if not self.orientation_tol > 0:
            raise ValueError("orientation_tol must be > 0")


def target_in_base_frame(state: PlantState, cfg: PoseCheckConfig) -> np.ndarray:
    """Inspection point expressed in the arm base frame at the current pose.

    Positive pitch tilts the thrust axis toward +x, so body x points to
    ``(cos, -sin)`` in the world x-z plane.
    """
    c, s = math.cos(state.theta), math.sin(state.theta)
    mx, mz = cfg.mount
    base_x = state.x + c * mx + s * mz
    base_z = -s * mx + c * mz
    dx = cfg.target[0] - base_x
    dz = cfg.target[2] - base_z
    return np.array([c * dx - s * dz, cfg.target[1], s * dx + c * dz])


def pose_ready(
    state: PlantState,
    cfg: PoseCheckConfig,
    links: LinkGeometry,
    limits: JointLimits = JointLimits(),
) -> bool:
    if not (cfg.theta_min <= state.theta <= cfg.theta_max):
        return False
    # world +x seen from the pitched body frame sits at angle +theta
    return reachable_with_orientation(
        target_in_base_frame(state, cfg), state.theta, links, limits, cfg.orientation_tol
    )


@dataclass(frozen=True)
class ApproachSetpoint:
    velocity: float = 0.2
    max_accel: float = 1.5
    max_pitch: float = 0.15


@dataclass(frozen=True)
class FreeFlightGains:
    k_v: float = 6.0
    kp_theta: float = 64.0
    kd_theta: float = 10.0

    def __post_init__(self):
        for name in ("k_v", "kp_theta", "kd_theta"):
            if not getattr(self, name) > 0:
                raise ValueError(f"FreeFlightGains.{name} must be > 0")


def free_flight_controller(
    state: PlantState,
    setpoint: ApproachSetpoint,
    gains: FreeFlightGains,
    params: VehicleParams,
    F_H: float = 0.0,
) -> ThrustCommand:
    """Velocity-hold approach through pitch.

    Collective thrust keeps the vertical balance ``M g / cos(theta)``; the
    horizontal velocity error maps to a pitch reference; differential thrust
    tracks it and cancels any contact moment. Pressing into the surface
    drives the velocity error to ``velocity`` and so settles the pitch near
    ``atan(k_v * velocity / g)``.
    """
    accel = gains.k_v * (setpoint.velocity - state.x_dot)
    accel = min(max(accel, -setpoint.max_accel), setpoint.max_accel)
    theta_ref = math.atan(accel / params.g)
    theta_ref = min(max(theta_ref, -setpoint.max_pitch), setpoint.max_pitch)
    theta_ddot = gains.kp_theta * (theta_ref - state.theta) - gains.kd_theta * state.theta_dot
    collective = 0.5 * params.M * params.g / math.cos(state.theta)
    differential = params.I_yy / params.L * (theta_ddot - F_H * params.l_H / params.I_yy)
    return ThrustCommand(collective - differential, collective + differential)


def default_standoff_state(contact: ContactParams, standoff: float = 0.5) -> PlantState:
    """Hover at ``standoff`` metres short of first touch."""
    return PlantState(x=contact.x_s - standoff)
