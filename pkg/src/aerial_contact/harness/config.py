"""Scenario configuration: TOML file <-> validated dataclasses.

Every section and key is optional; omitted values take the documented
defaults. Unknown sections or keys are rejected.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import tomli_w

from ..controller import ActuatorLimits, ControllerGains, ReferenceConfig
from ..kinematics import JointLimits, LinkGeometry
from ..plant import ContactParams, PlantState, VehicleParams
from ..transition import (
    ApproachSetpoint,
    FreeFlightGains,
    PoseCheckConfig,
    SchmittConfig,
    default_standoff_state,
)

SCENARIO_KINDS = ("contact-regulation", "full-transition", "statics-sweep", "workspace-dump")


class ConfigError(ValueError):
    """Configuration could not be parsed or violates an invariant."""


@dataclass(frozen=True)
class SweepConfig:
    F_min: float = 0.0
    F_max: float = 12.0
    F_step: float = 0.5
    mu: float = 0.3

    def __post_init__(self):
        if not self.F_step > 0:
            raise ValueError("F_step must be > 0")
        if not 0 <= self.F_min <= self.F_max:
            raise ValueError("need 0 <= F_min <= F_max")
        if not self.mu >= 0:
            raise ValueError("mu must be >= 0")

    def forces(self) -> list[float]:
        n = int(math.floor((self.F_max - self.F_min) / self.F_step + 1e-9))
        return [self.F_min + i * self.F_step for i in range(n + 1)]


@dataclass(frozen=True)
class WorkspaceConfig:
    resolution: float = math.radians(10)
    orientation: float = 0.0
    orientation_tol: float = 0.2

    def __post_init__(self):
        if not self.resolution > 0:
            raise ValueError("resolution must be > 0")


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str = "contact-regulation"
    dt: float = 0.001
    horizon: float = 3.0
    x_des: float = 0.0
    F_des: float = 8.5
    eps_sing: float = 0.02
    initial: PlantState = PlantState(-0.1, 0.0, 0.1, 1.0)
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    contact: ContactParams = field(default_factory=ContactParams)
    gains: ControllerGains = field(default_factory=ControllerGains)
    limits: ActuatorLimits = field(default_factory=ActuatorLimits)
    reference: ReferenceConfig = field(default_factory=ReferenceConfig)
    schmitt: SchmittConfig = field(default_factory=SchmittConfig)
    free_flight: ApproachSetpoint = field(default_factory=ApproachSetpoint)
    free_flight_gains: FreeFlightGains = field(default_factory=FreeFlightGains)
    links: LinkGeometry = field(default_factory=LinkGeometry)
    joint_limits: JointLimits = field(default_factory=JointLimits)
    pose: PoseCheckConfig = field(default_factory=PoseCheckConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    workspace: WorkspaceConfig = field(default_factory=WorkspaceConfig)

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(f"scenario kind must be one of {SCENARIO_KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be > 0, got {self.dt!r}")
        if not self.horizon >= self.dt:
            raise ValueError(f"horizon must be >= dt, got {self.horizon!r}")
        if not self.F_des >= 0:
            raise ValueError(f"F_des must be >= 0, got {self.F_des!r}")
        if not self.eps_sing > 0:
            raise ValueError(f"eps_sing must be > 0, got {self.eps_sing!r}")
        s = self.initial
        if not all(math.isfinite(v) for v in (s.x, s.x_dot, s.theta, s.theta_dot)):
            raise ValueError("initial state must be finite")
        if abs(s.theta) >= math.pi / 2:
            raise ValueError("initial pitch must be within (-pi/2, pi/2)")

    @property
    def steps(self) -> int:
        return int(round(self.horizon / self.dt))


# TOML section name -> ScenarioConfig attribute
_SECTIONS = {
    "initial": "initial",
    "vehicle": "vehicle",
    "contact": "contact",
    "gains": "gains",
    "limits": "limits",
    "reference": "reference",
    "schmitt": "schmitt",
    "free_flight": "free_flight",
    "free_flight_gains": "free_flight_gains",
    "manipulator": "links",
    "joint_limits": "joint_limits",
    "pose": "pose",
    "sweep": "sweep",
    "workspace": "workspace",
}
_SCALARS = ("kind", "dt", "horizon", "x_des", "F_des", "eps_sing")


DEFAULT_HORIZON = {"full-transition": 6.0}


def default_initial_state(kind: str, contact: ContactParams) -> PlantState:
    if kind == "full-transition":
        return default_standoff_state(contact)
    return PlantState(-0.1, 0.0, 0.1, 1.0)


_SECTION_TYPES = {
    "vehicle": VehicleParams,
    "contact": ContactParams,
    "gains": ControllerGains,
    "limits": ActuatorLimits,
    "reference": ReferenceConfig,
    "schmitt": SchmittConfig,
    "free_flight": ApproachSetpoint,
    "free_flight_gains": FreeFlightGains,
    "manipulator": LinkGeometry,
    "joint_limits": JointLimits,
    "pose": PoseCheckConfig,
    "sweep": SweepConfig,
    "workspace": WorkspaceConfig,
}


def _check_keys(values, allowed, section: str) -> dict:
    if not isinstance(values, dict):
        raise ConfigError(f"[{section}] must be a table")
    unknown = sorted(set(values) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")
    return values


def _build(cls, section: str, values: dict):
    names = [f.name for f in dataclasses.fields(cls)]
    values = _check_keys(values, names, section)
    kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in values.items()}
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}] {exc}") from None


def config_from_dict(data: dict) -> ScenarioConfig:
    _check_keys(data, [*_SECTIONS, "scenario"], "top level")
    kwargs = dict(_check_keys(data.get("scenario", {}), _SCALARS, "scenario"))
    for section, cls in _SECTION_TYPES.items():
        if section in data:
            kwargs[_SECTIONS[section]] = _build(cls, section, data[section])

    # horizon and initial state defaults depend on the scenario kind
    kind = kwargs.get("kind", "contact-regulation")
    if "horizon" not in kwargs and kind in DEFAULT_HORIZON:
        kwargs["horizon"] = DEFAULT_HORIZON[kind]
    initial = dataclasses.asdict(default_initial_state(kind, kwargs.get("contact", ContactParams())))
    initial.update(_check_keys(data.get("initial", {}), initial, "initial"))
    kwargs["initial"] = _build(PlantState, "initial", initial)
    try:
        return ScenarioConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[scenario] {exc}") from None


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(data)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    out = {"scenario": {name: getattr(cfg, name) for name in _SCALARS}}
    for section, attr in _SECTIONS.items():
        values = dataclasses.asdict(getattr(cfg, attr))
        out[section] = {k: list(v) if isinstance(v, tuple) else v for k, v in values.items()}
    return out


def dump_config(cfg: ScenarioConfig) -> str:
    return tomli_w.dumps(config_to_dict(cfg))
