"""Parameters, state and right-hand side of the coupled mood equations.

    dx/dt = -m1 x + b1 + c1 f1(y)
    dy/dt = -m2 y + b2 + c2 f2(x)
"""

import math
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from .influence import Influence, InfluenceFunction

PARAMETER_NAMES = ("m1", "m2", "b1", "b2", "c1", "c2")


class ParameterError(ValueError):
    """Raised when parameters, states or schedules violate their invariants."""


@dataclass(frozen=True)
class Parameters:
    """The six model constants plus the two influence functions."""

    m1: float
    m2: float
    b1: float
    b2: float
    c1: float
    c2: float
    f1: Influence = field(default_factory=InfluenceFunction)
    f2: Influence = field(default_factory=InfluenceFunction)

    def __post_init__(self) -> None:
        for name in PARAMETER_NAMES:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
        if self.m1 <= 0 or self.m2 <= 0:
            raise ParameterError(
                f"Forgetting rates must be positive, got m1={self.m1}, m2={self.m2}"
            )
        if self.c1 * self.c2 == 0:
            raise ParameterError(
                f"Influence strengths must be nonzero, got c1={self.c1}, c2={self.c2}"
            )

    def with_values(self, **changes: Any) -> "Parameters":
        """Return a validated copy with some fields replaced."""
        return replace(self, **changes)

    def swapped(self) -> "Parameters":
        """Exchange the roles of the two persons."""
        return Parameters(
            m1=self.m2, m2=self.m1, b1=self.b2, b2=self.b1,
            c1=self.c2, c2=self.c1, f1=self.f2, f2=self.f1,
        )


@dataclass(frozen=True)
class State:
    """Emotional valence of person 1 (x) and person 2 (y)."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ParameterError(f"State must be finite, got ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        """Return the state as a length-2 array."""
        return np.array([self.x, self.y], dtype=float)


@dataclass(frozen=True)
class ParameterSchedule:
    """Piecewise-constant parameters; each switch applies on [t_k, t_{k+1})."""

    initial: Parameters
    switches: tuple[tuple[float, Parameters], ...] = ()

    def __post_init__(self) -> None:
        previous = 0.0
        for t, params in self.switches:
            if not (math.isfinite(t) and t > previous):
                raise ParameterError(
                    f"Switch times must be positive and strictly increasing, got {t}"
                )
            if not isinstance(params, Parameters):
                raise ParameterError(f"Switch at t={t} does not carry Parameters")
            previous = t

    @classmethod
    def constant(cls, params: Parameters) -> "ParameterSchedule":
        """Schedule without switches."""
        return cls(initial=params)

    @property
    def switch_times(self) -> tuple[float, ...]:
        """Times at which the parameters change."""
        return tuple(t for t, _ in self.switches)

    def at(self, t: float) -> Parameters:
        """Parameters in force at time t."""
        current = self.initial
        for t_switch, params in self.switches:
            if t >= t_switch:
                current = params
        return current

    def segments(self, t_end: float) -> list[tuple[float, float, Parameters]]:
        """Split [0, t_end] into (start, stop, parameters) pieces."""
        bounds = [0.0] + [t for t in self.switch_times if t < t_end] + [t_end]
        return [(start, stop, self.at(start)) for start, stop in zip(bounds, bounds[1:])]


def field_components(x: ArrayLike, y: ArrayLike, p: Parameters) -> tuple[Any, Any]:
    """Vectorized right-hand side; x and y may be scalars or arrays."""
    dx = -p.m1 * np.asarray(x) + p.b1 + p.c1 * p.f1.eval(y)
    dy = -p.m2 * np.asarray(y) + p.b2 + p.c2 * p.f2.eval(x)
    return dx, dy


def vector_field(s: State, p: Parameters) -> tuple[float, float]:
    """Return (dx/dt, dy/dt) at a state."""
    dx, dy = field_components(s.x, s.y, p)
    return float(dx), float(dy)


def jacobian_at(x: float, y: float, p: Parameters) -> np.ndarray:
    """Jacobian matrix of the field at (x, y)."""
    return np.array(
        [
            [-p.m1, p.c1 * float(p.f1.deriv1(y))],
            [p.c2 * float(p.f2.deriv1(x)), -p.m2],
        ]
    )


def jacobian(s: State, p: Parameters) -> np.ndarray:
    """Jacobian [[-m1, c1 f1'(y)], [c2 f2'(x), -m2]] at a state."""
    return jacobian_at(s.x, s.y, p)


def divergence(p: Parameters) -> float:
    """Divergence of the field; independent of the state."""
    return -(p.m1 + p.m2)


def uninfluenced_equilibrium(p: Parameters) -> State:
    """Mood each person settles to in solitude, (b1/m1, b2/m2)."""
    return State(p.b1 / p.m1, p.b2 / p.m2)


def invariant_radius(p: Parameters) -> float:
    """Half-width R of a forward-invariant box [-R, R]^2.

    On |x| = R the term -m1 x dominates b1 + c1 f1(y) because |f1| is
    bounded, so the field points strictly inward; the +1 keeps that strict
    at floating-point precision.
    """
    sup1 = p.f1.sup_abs
    sup2 = p.f2.sup_abs
    if not (math.isfinite(sup1) and math.isfinite(sup2)):
        raise ParameterError("invariant_radius needs bounded influence functions")
    r1 = (abs(p.b1) + abs(p.c1) * sup1) / p.m1
    r2 = (abs(p.b2) + abs(p.c2) * sup2) / p.m2
    return max(r1, r2) + 1.0
