"""Unit test configuration."""

from dataclasses import dataclass
from typing import Any

import numpy as np
import pytest

from emodyad.equilibria import SteadyState, find_steady_states
from emodyad.model import Parameters


@dataclass(frozen=True)
class ZeroInfluence:
    """Influence that is identically zero."""

    sup_abs: float = 0.0

    def eval(self, xi: Any) -> Any:
        return np.zeros_like(np.asarray(xi, dtype=float))

    def deriv1(self, xi: Any) -> Any:
        return np.zeros_like(np.asarray(xi, dtype=float))

    def deriv2(self, xi: Any) -> Any:
        return np.zeros_like(np.asarray(xi, dtype=float))


@dataclass(frozen=True)
class LinearInfluence:
    """The identity map; unbounded, so it violates slope decay."""

    sup_abs: float = float("inf")

    def eval(self, xi: Any) -> Any:
        return np.asarray(xi, dtype=float)

    def deriv1(self, xi: Any) -> Any:
        return np.ones_like(np.asarray(xi, dtype=float))

    def deriv2(self, xi: Any) -> Any:
        return np.zeros_like(np.asarray(xi, dtype=float))


@dataclass(frozen=True)
class ScaledArctan:
    """k * atan(xi), without a closed-form antiderivative."""

    scale: float = 2.0

    @property
    def sup_abs(self) -> float:
        return self.scale * np.pi / 2

    def eval(self, xi: Any) -> Any:
        return self.scale * np.arctan(xi)

    def deriv1(self, xi: Any) -> Any:
        xi = np.asarray(xi, dtype=float)
        return self.scale / (1.0 + xi * xi)

    def deriv2(self, xi: Any) -> Any:
        xi = np.asarray(xi, dtype=float)
        return -2.0 * self.scale * xi / (1.0 + xi * xi) ** 2


@pytest.fixture
def friends_states(symmetric_friends: Parameters) -> list[SteadyState]:
    """Steady states of the symmetric friends."""
    return find_steady_states(symmetric_friends)


@pytest.fixture
def friends_saddle(friends_states: list[SteadyState]) -> SteadyState:
    """The saddle at the origin of the symmetric friends."""
    return friends_states[1]
