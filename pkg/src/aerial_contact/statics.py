"""Static equilibrium of the vehicle pressed against a vertical surface.

Balances with friction ``mu*F_H`` acting downward at the contact point,
``l_v`` ahead of and ``l_H`` above the centre of mass:

    horizontal:  (T1 + T2) sin(theta) = F_H
    vertical:    (T1 + T2) cos(theta) = M g + mu F_H
    pitch:       (T1 - T2) L / 2      = F_H l_H - mu F_H l_v
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .plant import ContactParams, VehicleParams


@dataclass(frozen=True)
class StaticEquilibrium:
    F_H: float
    theta: float
    T1: float
    T2: float
    F_V: float
    feasible: bool

    @property
    def T_total(self) -> float:
        return self.T1 + self.T2


def solve_equilibrium(
    F_H: float,
    mu: float,
    params: VehicleParams,
    contact: ContactParams,
    T_max: float = 21.0,
) -> StaticEquilibrium:
    """Closed-form equilibrium; ``feasible`` is False if a thrust leaves [0, T_max]."""
    if not F_H >= 0:
        raise ValueError(f"contact force must be non-negative, got {F_H!r}")
    if not mu >= 0:
        raise ValueError(f"friction coefficient must be non-negative, got {mu!r}")
    F_V = mu * F_H
    vertical = params.M * params.g + F_V
    theta = math.atan2(F_H, vertical)
    total = math.hypot(F_H, vertical)
    diff = 2.0 * (F_H * params.l_H - F_V * contact.l_v) / params.L
    T1 = 0.5 * (total + diff)
    T2 = 0.5 * (total - diff)
    feasible = 0.0 <= min(T1, T2) and max(T1, T2) <= T_max
    return StaticEquilibrium(F_H, theta, T1, T2, F_V, feasible)


def balance_residuals(eq: StaticEquilibrium, params: VehicleParams, contact: ContactParams):
    """Horizontal, vertical and moment residuals of a solution."""
    total = eq.T1 + eq.T2
    return (
        total * math.sin(eq.theta) - eq.F_H,
        total * math.cos(eq.theta) - (params.M * params.g + eq.F_V),
        (eq.T1 - eq.T2) * params.L / 2.0 - (eq.F_H * params.l_H - eq.F_V * contact.l_v),
    )


def thrust_sweep(
    F_range,
    mu: float,
    params: VehicleParams,
    contact: ContactParams,
    T_max: float = 21.0,
) -> list[StaticEquilibrium]:
    forces = list(F_range)
    if not forces:
        raise ValueError("force range is empty")
    return [solve_equilibrium(float(F), mu, params, contact, T_max) for F in forces]
