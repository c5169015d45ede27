"""Closed-loop simulation driver and trace monitors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..controller import (
    ContactReference,
    ControllerGains,
    OutputSetpoint,
    SingularDecouplingError,
    apply_limits,
    feedback_linearize,
    outer_loop,
    setpoint_from_force,
)
from ..plant import (
    ModelValidityError,
    PlantState,
    ThrustCommand,
    VehicleParams,
    contact_force,
    force_observer,
    rk4_step,
    state_derivative,
)
from ..transition import (
    Mode,
    SupervisorState,
    free_flight_controller,
    pose_ready,
    supervisor_step,
)
from .config import ScenarioConfig

SETTLING_BAND = 0.05


class TraceRow(NamedTuple):
    t: float
    x: float
    x_dot: float
    theta: float
    theta_dot: float
    T1_raw: float
    T2_raw: float
    T1: float
    T2: float
    F_H: float
    F_H_obs: float
    E: float
    mode: str
    flags: str


TRACE_COLUMNS = TraceRow._fields


@dataclass
class SimulationTrace:
    rows: list[TraceRow] = field(default_factory=list)
    aborted: str | None = None

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        idx = TRACE_COLUMNS.index(name)
        if name in ("mode", "flags"):
            return np.array([r[idx] for r in self.rows], dtype=object)
        return np.array([r[idx] for r in self.rows], dtype=float)


@dataclass(frozen=True)
class ScenarioSummary:
    settling_time_force: float
    settling_time_theta: float
    peak_thrust: float
    peak_raw_thrust: float
    max_pitch_rate: float
    steady_state_force_error: float
    energy_ratio: float
    contact_entries: int
    saturated_steps: int
    slew_limited_steps: int
    pitch_rate_violations: int
    singular_steps: int
    aborted: str | None = None


def energy(
    state: PlantState, setpoint: OutputSetpoint, gains: ControllerGains, params: VehicleParams
) -> float:
    """Kinetic energy plus PD "spring" energy about the setpoint."""
    return (
        0.5 * params.M * state.x_dot**2
        + 0.5 * params.I_yy * state.theta_dot**2
        + 0.5 * gains.kp1 * (setpoint.x_des - state.x) ** 2
        + 0.5 * gains.kp2 * (setpoint.theta_des - state.theta) ** 2
    )


def settling_time(t: np.ndarray, signal: np.ndarray, target: float, band: float = SETTLING_BAND) -> float:
    """Time after which ``signal`` stays within ``band*|target|`` of ``target``.

    Returns ``inf`` if the last sample is still outside the band.
    """
    outside = np.flatnonzero(np.abs(signal - target) > band * abs(target))
    if outside.size == 0:
        return float(t[0]) if len(t) else 0.0
    last = outside[-1]
    if last + 1 >= len(t):
        return math.inf
    return float(t[last + 1])


def _hover(state: PlantState, params: VehicleParams) -> ThrustCommand:
    half = 0.5 * params.M * params.g / math.cos(state.theta)
    return ThrustCommand(half, half)


def run_scenario(cfg: ScenarioConfig) -> tuple[SimulationTrace, ScenarioSummary]:
    """Fixed-step closed loop for ``contact-regulation`` or ``full-transition``.

    Each step: read the plant force, update the supervisor, pick the
    controller for the mode, limit the thrusts, log, then advance with RK4.
    A model-validity failure stops the run and is recorded in
    ``trace.aborted``.
    """
    if cfg.kind not in ("contact-regulation", "full-transition"):
        raise ValueError(f"run_scenario does not simulate kind {cfg.kind!r}")
    params, contact, limits = cfg.vehicle, cfg.contact, cfg.limits
    theta_des = setpoint_from_force(cfg.F_des, params)
    target = OutputSetpoint(x_des=cfg.x_des, theta_des=theta_des)

    if cfg.kind == "contact-regulation":
        sup = SupervisorState(Mode.CONTACT, engaged=True)
    else:
        sup = SupervisorState(Mode.FREE_FLIGHT, engaged=False)

    state = cfg.initial
    trace = SimulationTrace()
    prev: ThrustCommand | None = None
    reference: ContactReference | None = None
    t_entry = 0.0
    entries = 0

    for k in range(cfg.steps + 1):
        t = k * cfg.dt
        F_H = contact_force(state, contact)
        if sup.mode is Mode.FREE_FLIGHT:
            pose_ok = pose_ready(state, cfg.pose, cfg.links, cfg.joint_limits)
        else:
            pose_ok = True
        new_sup = supervisor_step(sup, F_H, pose_ok, cfg.schmitt)
        if new_sup.mode is Mode.CONTACT and (sup.mode is not Mode.CONTACT or reference is None):
            reference = ContactReference(
                state, cfg.x_des, theta_des, cfg.reference, limits.pitch_rate_max
            )
            t_entry = t
            if sup.mode is not Mode.CONTACT:
                entries += 1
        if new_sup.mode is Mode.FREE_FLIGHT:
            reference = None
        sup = new_sup

        flags = set()
        if sup.mode is Mode.CONTACT:
            v = outer_loop(reference(t - t_entry), state, cfg.gains)
            try:
                raw = feedback_linearize(v, state.theta, F_H, params, cfg.eps_sing)
            except SingularDecouplingError:
                raw = prev if prev is not None else _hover(state, params)
                flags.add("SINGULAR")
        else:
            raw = free_flight_controller(
                state, cfg.free_flight, cfg.free_flight_gains, params, F_H
            )
        u, limit_flags = apply_limits(raw, prev, cfg.dt, limits)
        flags |= limit_flags
        if abs(state.theta_dot) > limits.pitch_rate_max:
            flags.add("PITCH_RATE")

        x_ddot = state_derivative(state, u, params, contact)[1]
        trace.rows.append(
            TraceRow(
                t, state.x, state.x_dot, state.theta, state.theta_dot,
                float(raw.T1), float(raw.T2), float(u.T1), float(u.T2),
                F_H, float(force_observer(state.theta, x_ddot, params)),
                energy(state, target, cfg.gains, params),
                sup.mode.value, "|".join(sorted(flags)),
            )
        )
        prev = u
        if k == cfg.steps:
            break
        try:
            state = rk4_step(state, u, cfg.dt, params, contact)
        except ModelValidityError as exc:
            trace.aborted = f"t={t + cfg.dt:.6g}: {exc}"
            break

    return trace, summarize(trace, cfg, entries)


def summarize(trace: SimulationTrace, cfg: ScenarioConfig, contact_entries: int) -> ScenarioSummary:
    theta_des = setpoint_from_force(cfg.F_des, cfg.vehicle)
    t = trace.column("t")
    flags = [r.flags.split("|") if r.flags else [] for r in trace.rows]
    E = trace.column("E")
    F = trace.column("F_H")
    return ScenarioSummary(
        settling_time_force=settling_time(t, F, cfg.F_des),
        settling_time_theta=settling_time(t, trace.column("theta"), theta_des),
        peak_thrust=float(max(trace.column("T1").max(), trace.column("T2").max())),
        peak_raw_thrust=float(max(trace.column("T1_raw").max(), trace.column("T2_raw").max())),
        max_pitch_rate=float(np.abs(trace.column("theta_dot")).max()),
        steady_state_force_error=float(F[-1] - cfg.F_des),
        energy_ratio=float(E[-1] / E[0]) if E[0] > 0 else 0.0,
        contact_entries=contact_entries,
        saturated_steps=sum(any(f.endswith("_SAT") for f in fl) for fl in flags),
        slew_limited_steps=sum(any(f.endswith("_SLEW") for f in fl) for fl in flags),
        pitch_rate_violations=sum("PITCH_RATE" in fl for fl in flags),
        singular_steps=sum("SINGULAR" in fl for fl in flags),
        aborted=trace.aborted,
    )
