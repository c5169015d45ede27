"""Kinematics of the RRR inspection arm.

DH table (r, d, alpha, theta) per link:

    1: 0   l1  pi/2  theta1    (base yaw)
    2: l2  0   0     theta2
    3: l3  0   0     theta3

Joints 2 and 3 form a planar RR arm in the vertical plane selected by the
base yaw. The in-plane end-effector orientation is ``theta2 + theta3``,
measured from the horizontal toward +z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class UnreachableError(ValueError):
    """Target position is outside the arm's reachable annulus."""


@dataclass(frozen=True)
class LinkGeometry:
    """Link lengths in metres.

    ``l2`` and ``l3`` give joint torques (1.6, 3.1, 1.1) N m for a 6 N
    normal load plus 3.5 N friction at q = (0, 35, -15) deg; ``l1`` only
    shifts the workspace vertically.
    """

    l1: float = 0.10
    l2: float = 0.386832
    l3: float = 0.272597

    def __post_init__(self):
        for name in ("l1", "l2", "l3"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"LinkGeometry.{name} must be > 0, got {value!r}")

    @property
    def reach(self) -> float:
        return self.l2 + self.l3


@dataclass(frozen=True)
class JointLimits:
    lower: tuple[float, float, float] = (-math.pi, -math.radians(150), -math.radians(150))
    upper: tuple[float, float, float] = (math.pi, math.radians(150), math.radians(150))

    def __post_init__(self):
        if len(self.lower) != 3 or len(self.upper) != 3:
            raise ValueError("joint limits need three entries")
        for lo, hi in zip(self.lower, self.upper):
            if not lo < hi:
                raise ValueError(f"joint limit lower {lo!r} must be below upper {hi!r}")

    def contains(self, q: "JointConfiguration", tol: float = 1e-12) -> bool:
        return all(
            lo - tol <= v <= hi + tol for v, lo, hi in zip(q.as_tuple(), self.lower, self.upper)
        )


@dataclass(frozen=True)
class JointConfiguration:
    theta1: float = 0.0
    theta2: float = 0.0
    theta3: float = 0.0

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)


@dataclass(frozen=True)
class DHRow:
    r: float
    d: float
    alpha: float
    theta: float


@dataclass(frozen=True)
class EndEffectorPose:
    position: np.ndarray
    orientation: float


@dataclass(frozen=True)
class EndEffectorWrench:
    force: tuple[float, float, float]


def dh_transform(row: DHRow) -> np.ndarray:
    """``Rot_z(theta) Trans_z(d) Trans_x(r) Rot_x(alpha)``."""
    ct, st = math.cos(row.theta), math.sin(row.theta)
    ca, sa = math.cos(row.alpha), math.sin(row.alpha)
    return np.array(
        [
            [ct, -st * ca, st * sa, row.r * ct],
            [st, ct * ca, -ct * sa, row.r * st],
            [0.0, sa, ca, row.d],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def dh_table(q: JointConfiguration, links: LinkGeometry) -> list[DHRow]:
    return [
        DHRow(0.0, links.l1, math.pi / 2, q.theta1),
        DHRow(links.l2, 0.0, 0.0, q.theta2),
        DHRow(links.l3, 0.0, 0.0, q.theta3),
    ]


def link_frames(q: JointConfiguration, links: LinkGeometry) -> list[np.ndarray]:
    """Base-frame transforms of frames 0..3."""
    frames = [np.eye(4)]
    for row in dh_table(q, links):
        frames.append(frames[-1] @ dh_transform(row))
    return frames


def forward_kinematics(q: JointConfiguration, links: LinkGeometry) -> EndEffectorPose:
    T = link_frames(q, links)[-1]
    return EndEffectorPose(position=T[:3, 3].copy(), orientation=q.theta2 + q.theta3)


def inverse_kinematics(position, links: LinkGeometry, elbow: str = "up") -> JointConfiguration:
    """Analytic IK: base yaw from the target azimuth, then planar 2R.

    ``elbow="up"`` puts the elbow above the shoulder-wrist line
    (theta3 <= 0); ``"down"`` mirrors it.

    Raises:
        UnreachableError: if the in-plane distance from the shoulder is
            outside ``[|l2 - l3|, l2 + l3]``.
    """
    if elbow not in ("up", "down"):
        raise ValueError(f"elbow must be 'up' or 'down', got {elbow!r}")
    x, y, z = (float(v) for v in position)
    theta1 = math.atan2(y, x) if (x or y) else 0.0
    rho = math.hypot(x, y)
    h = z - links.l1
    l2, l3 = links.l2, links.l3
    dist = math.hypot(rho, h)
    tol = 1e-12 * max(1.0, links.reach)
    if dist > l2 + l3 + tol or dist < abs(l2 - l3) - tol:
        raise UnreachableError(
            f"target at {dist:.6g} m from the shoulder, reachable band is "
            f"[{abs(l2 - l3):.6g}, {l2 + l3:.6g}]"
        )
    cos3 = (dist * dist - l2 * l2 - l3 * l3) / (2.0 * l2 * l3)
    cos3 = min(1.0, max(-1.0, cos3))
    theta3 = math.acos(cos3)
    if elbow == "up":
        theta3 = -theta3
    theta2 = math.atan2(h, rho) - math.atan2(l3 * math.sin(theta3), l2 + l3 * math.cos(theta3))
    return JointConfiguration(theta1, theta2, theta3)


def jacobian(q: JointConfiguration, links: LinkGeometry) -> np.ndarray:
    """Position Jacobian, column i = z_{i-1} x (p_ee - p_{i-1})."""
    frames = link_frames(q, links)
    p_ee = frames[-1][:3, 3]
    J = np.empty((3, 3))
    for i in range(3):
        z = frames[i][:3, 2]
        J[:, i] = np.cross(z, p_ee - frames[i][:3, 3])
    return J


def joint_torques(q: JointConfiguration, links: LinkGeometry, wrench: EndEffectorWrench) -> np.ndarray:
    return jacobian(q, links).T @ np.asarray(wrench.force, dtype=float)


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


def reachable_with_orientation(
    point,
    orientation: float,
    links: LinkGeometry,
    limits: JointLimits = JointLimits(),
    tol: float = 0.2,
) -> bool:
    """True if some IK branch reaches ``point`` within joint limits with the
    in-plane orientation within ``tol`` of ``orientation``."""
    for elbow in ("up", "down"):
        try:
            q = inverse_kinematics(point, links, elbow)
        except UnreachableError:
            return False
        if limits.contains(q) and abs(_wrap(q.theta2 + q.theta3 - orientation)) <= tol:
            return True
    return False


@dataclass
class WorkspaceCloud:
    points: np.ndarray
    reachable: np.ndarray
    application: np.ndarray
    joints: np.ndarray

    def __len__(self) -> int:
        return len(self.points)


def joint_grid(limits: JointLimits, resolution: float) -> list[np.ndarray]:
    """Per-joint sample angles spaced by at most ``resolution`` radians."""
    if not resolution > 0:
        raise ValueError(f"resolution must be > 0, got {resolution!r}")
    axes = []
    for lo, hi in zip(limits.lower, limits.upper):
        n = int(math.ceil((hi - lo) / resolution - 1e-9)) + 1
        axes.append(np.linspace(lo, hi, n))
    return axes


def workspace_sample(
    links: LinkGeometry,
    limits: JointLimits = JointLimits(),
    resolution: float = math.radians(10),
    orientation: float = 0.0,
    tol: float = 0.2,
) -> WorkspaceCloud:
    """FK-map a joint-space grid; label points in the application space.

    Every grid point lies within the joint limits, so every emitted point is
    reachable; ``application`` marks those whose in-plane orientation is
    within ``tol`` of ``orientation``.
    """
    t1, t2, t3 = np.meshgrid(*joint_grid(limits, resolution), indexing="ij")
    t1, t2, t3 = t1.ravel(), t2.ravel(), t3.ravel()
    # planar closed form of the DH chain
    rho = links.l2 * np.cos(t2) + links.l3 * np.cos(t2 + t3)
    z = links.l1 + links.l2 * np.sin(t2) + links.l3 * np.sin(t2 + t3)
    points = np.column_stack([rho * np.cos(t1), rho * np.sin(t1), z])
    phi = t2 + t3
    mismatch = np.abs((phi - orientation + np.pi) % (2 * np.pi) - np.pi)
    return WorkspaceCloud(
        points=points,
        reachable=np.ones(len(points), dtype=bool),
        application=mismatch <= tol,
        joints=np.column_stack([t1, t2, t3]),
    )
