"""Steady-state enumeration and linear stability classification."""

import logging
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
from numpy.typing import ArrayLike
from scipy import optimize

from .model import Parameters, invariant_radius, jacobian_at

logger = logging.getLogger(__name__)

STABLE_NODE = "stable-node"
STABLE_FOCUS = "stable-focus"
SADDLE = "saddle"
DEGENERATE = "degenerate"
STABLE_CLASSES = (STABLE_NODE, STABLE_FOCUS)

SCAN_POINTS = 2001
BRACKET_WIDTH = 1e-10
DEDUP_DISTANCE = 1e-6
TOL_B = 1e-6
CLASSIFY_RESIDUAL = 1e-8
TOUCH_RESIDUAL = 1e-10


class NotASteadyStateError(ValueError):
    """Raised when classify is given a point that does not solve the steady-state system."""


class RegimeInconsistencyError(RuntimeError):
    """Raised when the steady-state count contradicts the coupling regime."""


@dataclass(frozen=True)
class SteadyState:
    """A fixed point with its characteristic-polynomial data."""

    x: float
    y: float
    trace: float
    det: float
    discriminant: float
    eigenvalues: tuple[complex, complex]
    stability: str

    @property
    def is_stable(self) -> bool:
        """True for stable nodes and foci."""
        return self.stability in STABLE_CLASSES

    @property
    def coords(self) -> tuple[float, float]:
        """(x, y) pair."""
        return (self.x, self.y)

    def as_dict(self) -> dict[str, Any]:
        """Return the equilibria-report entry."""
        return {
            "x": self.x,
            "y": self.y,
            "A": self.trace,
            "B": self.det,
            "discriminant": self.discriminant,
            "eigenvalues": [[ev.real, ev.imag] for ev in self.eigenvalues],
            "class": self.stability,
        }


def nullcline1(y: ArrayLike, p: Parameters) -> Any:
    """x on the dx/dt = 0 curve: (b1 + c1 f1(y)) / m1."""
    return (p.b1 + p.c1 * p.f1.eval(y)) / p.m1


def nullcline2(x: ArrayLike, p: Parameters) -> Any:
    """y on the dy/dt = 0 curve: (b2 + c2 f2(x)) / m2."""
    return (p.b2 + p.c2 * p.f2.eval(x)) / p.m2


def residual(x: float, y: float, p: Parameters) -> tuple[float, float]:
    """Componentwise residual of the steady-state equations."""
    return float(x - nullcline1(y, p)), float(y - nullcline2(x, p))


def _polish(
    func: Callable[[float], float],
    dfunc: Callable[[float], float],
    a: float,
    b: float,
) -> float:
    root = optimize.bisect(func, a, b, xtol=BRACKET_WIDTH)
    try:
        polished = optimize.newton(func, root, fprime=dfunc, tol=1e-12, maxiter=50)
    except (RuntimeError, ZeroDivisionError, OverflowError):
        return root
    if a <= polished <= b and abs(func(polished)) <= abs(func(root)):
        return float(polished)
    return root


def _roots_near_extremum(
    func: Callable[[float], float],
    dfunc: Callable[[float], float],
    a: float,
    b: float,
) -> list[float]:
    # func(a) and func(b) share a sign
    da, db = dfunc(a), dfunc(b)
    if da * db > 0:
        return []
    xc = optimize.brentq(dfunc, a, b, xtol=1e-14) if da * db < 0 else (a if da == 0 else b)
    fc = func(xc)
    if abs(fc) <= TOUCH_RESIDUAL:
        return [float(xc)]
    if fc * func(a) < 0:
        return [_polish(func, dfunc, a, xc), _polish(func, dfunc, xc, b)]
    return []


def find_scalar_roots(
    func: Callable[[Any], Any],
    dfunc: Callable[[Any], Any],
    lo: float,
    hi: float,
    points: int = SCAN_POINTS,
) -> list[float]:
    """All roots of a scalar function on [lo, hi] by sign-change scan.

    Sign changes are bisected and Newton-polished. At a local minimum of
    |func| on the grid the critical point between its neighbours is
    located, which recovers roots that touch zero and pairs of roots
    closer together than the grid spacing.

    Args:
        func: Vectorized function.
        dfunc: Its derivative, vectorized.
        lo: Left end of the scan.
        hi: Right end of the scan.
        points: Number of scan points.

    Returns:
        Sorted roots, merged when closer than DEDUP_DISTANCE.
    """
    grid = np.linspace(lo, hi, points)
    values = np.asarray(func(grid), dtype=float)

    def f(x: float) -> float:
        return float(func(x))

    def df(x: float) -> float:
        return float(dfunc(x))

    found = [float(x) for x in grid[values == 0.0]]
    for i in np.flatnonzero(values[:-1] * values[1:] < 0):
        found.append(_polish(f, df, float(grid[i]), float(grid[i + 1])))

    signs = np.sign(values)
    mags = np.abs(values)
    for i in range(1, points - 1):
        if signs[i] == 0 or signs[i - 1] != signs[i] or signs[i + 1] != signs[i]:
            continue
        if mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1]:
            found.extend(_roots_near_extremum(f, df, float(grid[i - 1]), float(grid[i + 1])))

    roots: list[float] = []
    for x in sorted(found):
        if roots and x - roots[-1] < DEDUP_DISTANCE:
            if abs(f(x)) < abs(f(roots[-1])):
                roots[-1] = x
            continue
        roots.append(x)
    return roots


def classify(
    ss_coords: tuple[float, float], p: Parameters, tol_b: float = TOL_B
) -> SteadyState:
    """Fill in trace, determinant term, eigenvalues and stability class.

    Raises:
        NotASteadyStateError: If the residual exceeds 1e-8.
    """
    x, y = float(ss_coords[0]), float(ss_coords[1])
    r1, r2 = residual(x, y, p)
    if max(abs(r1), abs(r2)) > CLASSIFY_RESIDUAL:
        raise NotASteadyStateError(
            f"({x}, {y}) is not a steady state: residual ({r1:.3g}, {r2:.3g})"
        )
    jac = jacobian_at(x, y, p)
    trace = -(p.m1 + p.m2)
    det = p.m1 * p.m2 - p.c1 * p.c2 * float(p.f2.deriv1(x)) * float(p.f1.deriv1(y))
    disc = trace * trace - 4.0 * det
    eig = sorted(np.linalg.eigvals(jac).astype(complex), key=lambda z: (-z.real, -z.imag))

    if det < -tol_b:
        stability = SADDLE
    elif det <= tol_b:
        stability = DEGENERATE
    elif disc < 0:
        stability = STABLE_FOCUS
    else:
        stability = STABLE_NODE
    return SteadyState(
        x=x,
        y=y,
        trace=trace,
        det=det,
        discriminant=disc,
        eigenvalues=(complex(eig[0]), complex(eig[1])),
        stability=stability,
    )


def find_steady_states(p: Parameters, points: int = SCAN_POINTS) -> list[SteadyState]:
    """All steady states inside the invariant box, sorted by x.

    The system reduces to the scalar equation
    F(x) = nullcline1(nullcline2(x)) - x = 0.
    """
    radius = invariant_radius(p)

    def composed(x: Any) -> Any:
        return nullcline1(nullcline2(x, p), p) - x

    def composed_slope(x: Any) -> Any:
        y = nullcline2(x, p)
        return (p.c1 / p.m1) * p.f1.deriv1(y) * (p.c2 / p.m2) * p.f2.deriv1(x) - 1.0

    roots = find_scalar_roots(composed, composed_slope, -radius, radius, points)
    states = [classify((x, float(nullcline2(x, p))), p) for x in roots]
    if not states:
        raise RegimeInconsistencyError(f"No steady state found for {p}")
    logger.debug("Found %d steady states: %s", len(states), [s.stability for s in states])
    return states


@dataclass(frozen=True)
class RegimeReport:
    """Which of the one/two/three steady-state cases holds."""

    case: int
    observed_count: int
    threshold: float | None
    products: tuple[float, ...]

    @property
    def expected_count(self) -> int:
        """Number of steady states the case implies."""
        return self.case


def count_regime(p: Parameters, sss: list[SteadyState], tol_b: float = TOL_B) -> RegimeReport:
    """Decide the steady-state case from f1'(ys) f2'(xs) against m1 m2 / (c1 c2).

    Raises:
        RegimeInconsistencyError: If the observed count disagrees with the case.
    """
    cc = p.c1 * p.c2
    mm = p.m1 * p.m2
    products = tuple(
        float(p.f1.deriv1(s.y)) * float(p.f2.deriv1(s.x)) for s in sss
    )
    threshold = mm / cc if cc > 0 else None
    if cc <= mm:
        case = 1
    elif any(s.det < -tol_b for s in sss):
        case = 3
    elif any(abs(s.det) <= tol_b for s in sss):
        case = 2
    else:
        case = 1
    report = RegimeReport(
        case=case, observed_count=len(sss), threshold=threshold, products=products
    )
    if report.expected_count != report.observed_count:
        raise RegimeInconsistencyError(
            f"Case {case} implies {case} steady states but {len(sss)} were found"
        )
    return report
