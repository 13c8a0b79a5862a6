"""Saturating influence functions and their axiom checks."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Protocol

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate

logger = logging.getLogger(__name__)

KINDS = ("atan", "tanh")

AXIOMS = (
    "zero_at_origin",
    "unit_slope",
    "increasing",
    "concavity",
    "slope_decay",
)


class DomainError(ValueError):
    """Raised for non-finite arguments or an invalid influence definition."""


class Influence(Protocol):
    """Anything usable as an influence function."""

    @property
    def sup_abs(self) -> float:
        """Supremum of |f| over the real line."""

    def eval(self, xi: Any) -> Any:
        """Return f(xi)."""

    def deriv1(self, xi: Any) -> Any:
        """Return f'(xi)."""

    def deriv2(self, xi: Any) -> Any:
        """Return f''(xi)."""


def _check_finite(xi: Any) -> None:
    if not np.all(np.isfinite(xi)):
        raise DomainError(f"Influence argument must be finite, got {xi!r}")


@dataclass(frozen=True)
class InfluenceFunction:
    """f(xi) = s * g(xi / s) with g = arctan or tanh.

    The scaling keeps f'(0) = 1 for every saturation s, so |c_i| alone
    measures how strongly one partner moves the other near neutral mood.
    """

    kind: str = "atan"
    saturation: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DomainError(
                f"Invalid influence kind: {self.kind}. Must be one of {', '.join(KINDS)}"
            )
        if not (math.isfinite(self.saturation) and self.saturation > 0):
            raise DomainError(
                f"Influence saturation must be positive, got {self.saturation}"
            )

    @property
    def sup_abs(self) -> float:
        """Supremum of |f|: s*pi/2 for atan, s for tanh."""
        if self.kind == "atan":
            return self.saturation * math.pi / 2
        return self.saturation

    def eval(self, xi: ArrayLike) -> Any:
        """Return f(xi)."""
        _check_finite(xi)
        s = self.saturation
        if self.kind == "atan":
            return s * np.arctan(np.divide(xi, s))
        return s * np.tanh(np.divide(xi, s))

    def deriv1(self, xi: ArrayLike) -> Any:
        """Return f'(xi), always in (0, 1]."""
        _check_finite(xi)
        z = np.divide(xi, self.saturation)
        if self.kind == "atan":
            return 1.0 / (1.0 + z * z)
        return 1.0 / np.cosh(z) ** 2

    def deriv2(self, xi: ArrayLike) -> Any:
        """Return f''(xi); its sign is opposite to the sign of xi."""
        _check_finite(xi)
        s = self.saturation
        z = np.divide(xi, s)
        if self.kind == "atan":
            return -2.0 * z / (1.0 + z * z) ** 2 / s
        return -2.0 * np.tanh(z) / np.cosh(z) ** 2 / s

    def antiderivative(self, xi: ArrayLike) -> Any:
        """Return the antiderivative of f vanishing at 0."""
        _check_finite(xi)
        s = self.saturation
        z = np.divide(xi, s)
        if self.kind == "atan":
            return s * s * (z * np.arctan(z) - 0.5 * np.log1p(z * z))
        # ln cosh z = |z| + ln(1 + e^{-2|z|}) - ln 2, stable for large |z|
        a = np.abs(z)
        return s * s * (a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0))

    def as_dict(self) -> dict[str, Any]:
        """Return the config representation."""
        return {"kind": self.kind, "saturation": self.saturation}


def integrate_shifted(f: Influence, shift: float, upper: float) -> float:
    """Return the integral of f(xi + shift) - f(shift) for xi from 0 to upper.

    Uses the closed-form antiderivative when the function provides one,
    adaptive quadrature otherwise.
    """
    antiderivative = getattr(f, "antiderivative", None)
    base = float(f.eval(shift))
    if antiderivative is not None:
        return float(
            antiderivative(upper + shift) - antiderivative(shift) - upper * base
        )
    value, _ = integrate.quad(
        lambda xi: float(f.eval(xi + shift)) - base, 0.0, upper, epsabs=1e-10
    )
    return float(value)


@dataclass(frozen=True)
class AxiomResult:
    """Outcome of one axiom check."""

    axiom: str
    passed: bool
    witness: float | None = None

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {"axiom": self.axiom, "passed": self.passed, "witness": self.witness}


@dataclass(frozen=True)
class AxiomReport:
    """Pass/fail per axiom, with the violating point on failure."""

    results: tuple[AxiomResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        """True when every axiom holds on the grid."""
        return all(r.passed for r in self.results)

    def result(self, axiom: str) -> AxiomResult:
        """Look up one axiom by name."""
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "passed": self.passed,
            "axioms": [r.as_dict() for r in self.results],
        }


def _first_violation(grid: np.ndarray, bad: np.ndarray) -> float | None:
    idx = np.flatnonzero(bad)
    return float(grid[idx[0]]) if idx.size else None


def validate_axioms(
    f: Influence,
    grid_half_width: float = 100.0,
    grid_points: int = 10001,
    tol: float = 1e-9,
) -> AxiomReport:
    """Check the five influence-function axioms on a symmetric grid.

    Args:
        f: Influence function (any object following the Influence protocol).
        grid_half_width: Grid spans [-w, w].
        grid_points: Number of grid points, at least 3.
        tol: Absolute tolerance for the equality-type axioms.

    Returns:
        AxiomReport with one entry per axiom.

    Raises:
        DomainError: If the grid parameters are invalid.
    """
    if grid_points < 3:
        raise DomainError(f"grid_points must be at least 3, got {grid_points}")
    if not grid_half_width > 0 or not tol > 0:
        raise DomainError("grid_half_width and tol must be positive")

    grid = np.linspace(-grid_half_width, grid_half_width, grid_points)
    d1 = np.asarray(f.deriv1(grid), dtype=float)
    d2 = np.asarray(f.deriv2(grid), dtype=float)
    nonzero = grid != 0.0

    results = []
    value0 = float(f.eval(0.0))
    ok = abs(value0) <= tol
    results.append(AxiomResult("zero_at_origin", ok, None if ok else 0.0))
    slope0 = float(f.deriv1(0.0))
    ok = abs(slope0 - 1.0) <= tol
    results.append(AxiomResult("unit_slope", ok, None if ok else 0.0))

    witness = _first_violation(grid, ~(d1 > 0))
    results.append(AxiomResult("increasing", witness is None, witness))

    witness = _first_violation(grid, nonzero & ~(grid * d2 < 0))
    results.append(AxiomResult("concavity", witness is None, witness))

    # f' must have decayed well below its value at the origin at the grid edge
    # and decrease monotonically in |xi| on each side.
    outer = np.abs(grid) == grid_half_width
    decay_bad = outer & (d1 >= 0.5 * slope0)
    right = grid >= 0
    mono_bad = np.zeros_like(grid, dtype=bool)
    mono_bad[right] = np.concatenate(([False], np.diff(d1[right]) > tol))
    left = grid <= 0
    mono_bad[left] = np.concatenate((np.diff(d1[left]) < -tol, [False]))
    witness = _first_violation(grid, decay_bad | mono_bad)
    results.append(AxiomResult("slope_decay", witness is None, witness))

    report = AxiomReport(tuple(results))
    logger.debug("Axiom report for %r: passed=%s", f, report.passed)
    return report
