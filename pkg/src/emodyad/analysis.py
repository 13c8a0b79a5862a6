"""Stability certificates, separatrices, basins of attraction and parameter scans."""

import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Iterable, TypeVar

import numpy as np
from scipy.integrate import solve_ivp

from .equilibria import (
    DEGENERATE,
    SADDLE,
    SteadyState,
    find_steady_states,
)
from .influence import integrate_shifted
from .integrate import converge_batch
from .model import (
    PARAMETER_NAMES,
    ParameterError,
    Parameters,
    divergence,
    field_components,
    invariant_radius,
    jacobian_at,
    uninfluenced_equilibrium,
)

logger = logging.getLogger(__name__)

UNRESOLVED = -1
SADDLE_BOUND = -2
LYAPUNOV_FUNCTIONS = ("auto", "quadratic", "integral")
SEPARATRIX_OFFSET = 1e-6
DESCENT_TOLERANCE = 1e-10

T = TypeVar("T")
R = TypeVar("R")


class PreconditionError(ValueError):
    """Raised when a checker is called outside the regime it certifies."""


def _fan_out(func: Callable[[T], R], tasks: Iterable[T], workers: int) -> list[R]:
    """Map func over tasks, in order, optionally across processes."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, tasks))


def theorem1_applies(p: Parameters, sss: list[SteadyState]) -> bool:
    """Weak coupling: m1 m2 > |c1 c2| and a single steady state."""
    return p.m1 * p.m2 > abs(p.c1 * p.c2) and len(sss) == 1


def theorem2_applies(p: Parameters) -> bool:
    """Opposite attitudes: c1 c2 < 0."""
    return p.c1 * p.c2 < 0


def divergence_certificate(p: Parameters) -> float:
    """Constant negative divergence, which rules out periodic orbits."""
    return divergence(p)


def focus_condition(ss: SteadyState, p: Parameters) -> bool:
    """True when the steady state of an opposite-attitude couple is a focus.

    Raises:
        PreconditionError: If c1 c2 >= 0.
    """
    cc = p.c1 * p.c2
    if cc >= 0:
        raise PreconditionError(f"focus_condition needs c1*c2 < 0, got {cc}")
    lhs = float(p.f2.deriv1(ss.x)) * float(p.f1.deriv1(ss.y))
    return lhs > -((p.m1 - p.m2) ** 2) / (4.0 * cc)


def oscillation_condition_51(p: Parameters) -> bool:
    """sqrt(|c1 c2|) > |m1 - m2| / 2: spiralling is possible near neutral mood."""
    return math.sqrt(abs(p.c1 * p.c2)) > abs(p.m1 - p.m2) / 2.0


class QuadraticLyapunov:
    """V = (x - xs)^2 / 2 + C (y - ys)^2 / 2 with C = (2 m1 m2 - |c1 c2|) / c2^2."""

    name = "quadratic"

    def __init__(self, p: Parameters, ss: SteadyState) -> None:
        self.p = p
        self.ss = ss
        self.weight = (2.0 * p.m1 * p.m2 - abs(p.c1 * p.c2)) / (p.c2 * p.c2)

    def value(self, x: Any, y: Any) -> Any:
        u = np.asarray(x) - self.ss.x
        v = np.asarray(y) - self.ss.y
        return 0.5 * (u * u + self.weight * v * v)

    def derivative(self, x: Any, y: Any) -> Any:
        dx, dy = field_components(x, y, self.p)
        return (np.asarray(x) - self.ss.x) * dx + self.weight * (np.asarray(y) - self.ss.y) * dy


class IntegralLyapunov:
    """L = |c2| * int_0^u Df2 + |c1| * int_0^v Df1, shifted to the steady state."""

    name = "integral"

    def __init__(self, p: Parameters, ss: SteadyState) -> None:
        self.p = p
        self.ss = ss

    def value(self, x: Any, y: Any) -> Any:
        p, ss = self.p, self.ss
        part_x = np.vectorize(lambda u: integrate_shifted(p.f2, ss.x, u))
        part_y = np.vectorize(lambda v: integrate_shifted(p.f1, ss.y, v))
        u = np.asarray(x, dtype=float) - ss.x
        v = np.asarray(y, dtype=float) - ss.y
        return abs(p.c2) * part_x(u) + abs(p.c1) * part_y(v)

    def derivative(self, x: Any, y: Any) -> Any:
        p, ss = self.p, self.ss
        dx, dy = field_components(x, y, p)
        shift_x = p.f2.eval(x) - p.f2.eval(ss.x)
        shift_y = p.f1.eval(y) - p.f1.eval(ss.y)
        return abs(p.c2) * shift_x * dx + abs(p.c1) * shift_y * dy


def quadratic_lyapunov(p: Parameters, ss: SteadyState) -> QuadraticLyapunov:
    """Lyapunov function for the weak-coupling case."""
    return QuadraticLyapunov(p, ss)


def integral_lyapunov(p: Parameters, ss: SteadyState) -> IntegralLyapunov:
    """Lyapunov function for the opposite-attitude case."""
    return IntegralLyapunov(p, ss)


@dataclass(frozen=True)
class LyapunovReport:
    """Outcome of sampling a Lyapunov function over the invariant box."""

    function: str
    n_samples: int
    max_derivative: float
    min_value: float
    strictly_decreasing: bool
    tol: float = DESCENT_TOLERANCE

    @property
    def passed(self) -> bool:
        """No sample shows growth beyond tol."""
        return self.max_derivative <= self.tol

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "function": self.function,
            "n_samples": self.n_samples,
            "max_derivative": self.max_derivative,
            "min_value": self.min_value,
            "strictly_decreasing": self.strictly_decreasing,
            "passed": self.passed,
        }


def lyapunov_descent_check(
    p: Parameters,
    ss: SteadyState,
    n_samples: int = 10000,
    function: str = "auto",
    seed: int = 0,
) -> LyapunovReport:
    """Sample the invariant box and check the Lyapunov derivative is non-positive.

    The steady state itself is always included as the first sample.

    Args:
        p: Parameters.
        ss: The steady state the function is centred on.
        n_samples: Number of random samples.
        function: "quadratic", "integral" or "auto" (pick by regime).
        seed: Seed for numpy.random.default_rng.

    Returns:
        LyapunovReport with the largest observed derivative.

    Raises:
        PreconditionError: If neither global-stability regime applies, or
            the requested function does not fit the regime.
    """
    if function not in LYAPUNOV_FUNCTIONS:
        raise PreconditionError(
            f"Invalid Lyapunov function: {function}. Must be one of {', '.join(LYAPUNOV_FUNCTIONS)}"
        )
    if n_samples < 1:
        raise PreconditionError(f"n_samples must be positive, got {n_samples}")
    weak = theorem1_applies(p, find_steady_states(p))
    opposite = theorem2_applies(p)
    if function == "auto":
        if not (weak or opposite):
            raise PreconditionError("No global-stability regime applies to these parameters")
        function = "quadratic" if weak else "integral"
    if function == "quadratic" and not weak:
        raise PreconditionError("Quadratic function needs m1*m2 > |c1*c2| and one steady state")
    if function == "integral" and not opposite:
        raise PreconditionError("Integral function needs c1*c2 < 0")

    lf = quadratic_lyapunov(p, ss) if function == "quadratic" else integral_lyapunov(p, ss)
    radius = invariant_radius(p)
    rng = np.random.default_rng(seed)
    samples = np.vstack(([ss.x, ss.y], rng.uniform(-radius, radius, size=(n_samples, 2))))
    xs, ys = samples[:, 0], samples[:, 1]
    deriv = np.asarray(lf.derivative(xs, ys), dtype=float)
    values = np.asarray(lf.value(xs, ys), dtype=float)
    off_state = np.hypot(xs - ss.x, ys - ss.y) > 0

    report = LyapunovReport(
        function=function,
        n_samples=n_samples,
        max_derivative=float(np.max(deriv)),
        min_value=float(np.min(values[off_state])) if off_state.any() else 0.0,
        strictly_decreasing=bool(np.all(deriv[off_state] < 0)),
    )
    logger.info(
        "Lyapunov %s check over %d samples: max derivative %.3g",
        function, n_samples, report.max_derivative,
    )
    return report


@dataclass(frozen=True)
class Separatrix:
    """The two branches of a saddle's stable manifold, each starting at the saddle."""

    saddle: SteadyState
    branches: tuple[np.ndarray, np.ndarray]

    def to_csv(self) -> str:
        """Render as CSV with header branch,x,y."""
        buf = io.StringIO()
        buf.write("branch,x,y\n")
        for index, branch in enumerate(self.branches):
            for x, y in branch:
                buf.write(f"{index},{x:.17g},{y:.17g}\n")
        return buf.getvalue()


def _trace_branch(
    p: Parameters, start: np.ndarray, origin: np.ndarray, arc_length: float, box: float
) -> np.ndarray:
    def reversed_field(_t: float, z: np.ndarray) -> np.ndarray:
        dx, dy = field_components(z[0], z[1], p)
        return np.array([-dx, -dy, math.hypot(dx, dy)])

    def arc_reached(_t: float, z: np.ndarray) -> float:
        return z[2] - arc_length

    def box_left(_t: float, z: np.ndarray) -> float:
        return max(abs(z[0]), abs(z[1])) - box

    for event in (arc_reached, box_left):
        event.terminal = True  # type: ignore[attr-defined]
        event.direction = 1  # type: ignore[attr-defined]

    z0 = np.array([start[0], start[1], float(np.hypot(*(start - origin)))])
    sol = solve_ivp(
        reversed_field, (0.0, 1e3), z0, method="RK45",
        rtol=1e-9, atol=1e-12, max_step=0.01, events=(arc_reached, box_left),
    )
    return np.vstack((origin, sol.y[:2].T))


def separatrix(
    saddle: SteadyState, p: Parameters, arc_length: float = 5.0
) -> Separatrix:
    """Trace the stable manifold of a saddle by reversed-time integration.

    Raises:
        PreconditionError: If the state is not a saddle or arc_length <= 0.
    """
    if saddle.stability != SADDLE:
        raise PreconditionError(f"separatrix needs a saddle, got {saddle.stability}")
    if not arc_length > 0:
        raise PreconditionError(f"arc_length must be positive, got {arc_length}")
    eigvals, eigvecs = np.linalg.eig(jacobian_at(saddle.x, saddle.y, p))
    stable = np.real(eigvecs[:, int(np.argmin(np.real(eigvals)))])
    stable /= np.linalg.norm(stable)
    origin = np.array([saddle.x, saddle.y])
    box = invariant_radius(p)
    branches = tuple(
        _trace_branch(p, origin + sign * SEPARATRIX_OFFSET * stable, origin, arc_length, box)
        for sign in (1.0, -1.0)
    )
    logger.debug("Separatrix branches with %d and %d points", *(len(b) for b in branches))
    return Separatrix(saddle=saddle, branches=branches)  # type: ignore[arg-type]


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid of cell centres."""

    x_range: tuple[float, float] = (-4.0, 4.0)
    y_range: tuple[float, float] = (-4.0, 4.0)
    nx: int = 101
    ny: int = 101

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise PreconditionError(f"Grid needs at least 2x2 cells, got {self.nx}x{self.ny}")
        for name in ("x_range", "y_range"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise PreconditionError(f"{name} must satisfy lo < hi, got ({lo}, {hi})")

    @property
    def x_centers(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    @property
    def y_centers(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)


@dataclass(frozen=True)
class BasinMap:
    """Per-cell attractor labels; row j holds the cells with y = y_centers[j]."""

    grid: GridSpec
    labels: np.ndarray
    attractors: tuple[SteadyState, ...]

    def to_csv(self) -> str:
        """Row-major raster of integer labels."""
        return "".join(",".join(str(int(v)) for v in row) + "\n" for row in self.labels)

    def legend(self) -> dict[str, Any]:
        """Attractor legend written next to the raster."""
        return {
            "x_range": list(self.grid.x_range),
            "y_range": list(self.grid.y_range),
            "nx": self.grid.nx,
            "ny": self.grid.ny,
            "unresolved": UNRESOLVED,
            "saddle_bound": SADDLE_BOUND,
            "attractors": [
                {"label": i, **ss.as_dict()} for i, ss in enumerate(self.attractors)
            ],
        }

    def legend_json(self) -> str:
        """Legend as a JSON document."""
        return json.dumps(self.legend(), indent=2) + "\n"


def _label_row(task: tuple) -> list[int]:
    starts, p, attractors, saddles, tol, t_max, radius = task
    final, done = converge_batch(starts, p, tol, t_max)
    labels = []
    for (x, y), ok in zip(final, done):
        label = UNRESOLVED
        if ok:
            if attractors.size:
                dist = np.hypot(attractors[:, 0] - x, attractors[:, 1] - y)
                nearest = int(np.argmin(dist))
                if dist[nearest] <= radius:
                    label = nearest
            if label == UNRESOLVED and saddles.size:
                if np.min(np.hypot(saddles[:, 0] - x, saddles[:, 1] - y)) <= radius:
                    label = SADDLE_BOUND
        labels.append(label)
    return labels


def basin_map(
    p: Parameters,
    grid: GridSpec,
    tol: float = 1e-8,
    t_max: float = 200.0,
    match_radius: float = 1e-3,
    workers: int = 1,
) -> BasinMap:
    """Label every grid cell by the attractor its centre converges to.

    Each grid row is one unit of work; rows are mapped across processes
    when workers > 1 and merged in row order.

    Raises:
        PreconditionError: If no stable steady state exists.
    """
    sss = find_steady_states(p)
    attractors = tuple(s for s in sss if s.is_stable)
    if not attractors:
        raise PreconditionError("basin_map needs at least one stable steady state")
    attractor_xy = np.array([s.coords for s in attractors])
    saddle_xy = np.array([s.coords for s in sss if s.stability in (SADDLE, DEGENERATE)]).reshape(-1, 2)

    xc = grid.x_centers
    tasks = [
        (np.column_stack((xc, np.full_like(xc, y))), p, attractor_xy, saddle_xy, tol, t_max, match_radius)
        for y in grid.y_centers
    ]
    logger.info("Computing %dx%d basin map with %d attractors", grid.nx, grid.ny, len(attractors))
    rows = _fan_out(_label_row, tasks, workers)
    labels = np.array(rows, dtype=int)
    logger.info("%d of %d cells unresolved", int(np.sum(labels == UNRESOLVED)), labels.size)
    return BasinMap(grid=grid, labels=labels, attractors=attractors)


@dataclass(frozen=True)
class FoldInterval:
    """Adjacent scan samples between which the steady-state count changes."""

    lo: float
    hi: float
    count_lo: int
    count_hi: int


@dataclass(frozen=True)
class ScanResult:
    """Steady-state counts and classes along a one-parameter sweep."""

    param: str
    values: np.ndarray
    counts: tuple[int, ...]
    classes: tuple[tuple[str, ...], ...]
    folds: tuple[FoldInterval, ...]

    def to_csv(self) -> str:
        """Render as CSV with header param_value,n_states,classes."""
        buf = io.StringIO()
        buf.write("param_value,n_states,classes\n")
        for value, count, labels in zip(self.values, self.counts, self.classes):
            buf.write(f"{value:.17g},{count},{';'.join(labels)}\n")
        return buf.getvalue()


def _scan_sample(p: Parameters) -> tuple[str, ...]:
    return tuple(s.stability for s in find_steady_states(p))


def scan_parameter(
    p: Parameters, name: str, lo: float, hi: float, n: int, workers: int = 1
) -> ScanResult:
    """Count and classify steady states at n evenly spaced values of one parameter.

    Raises:
        PreconditionError: If the name or range is invalid, or a sample
            value violates the parameter invariants.
    """
    if name not in PARAMETER_NAMES:
        raise PreconditionError(
            f"Invalid scan parameter: {name}. Must be one of {', '.join(PARAMETER_NAMES)}"
        )
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise PreconditionError(f"Scan range must satisfy lo < hi, got [{lo}, {hi}]")
    if n < 2:
        raise PreconditionError(f"Scan needs at least 2 samples, got {n}")

    values = np.linspace(lo, hi, n)
    try:
        samples = [p.with_values(**{name: float(v)}) for v in values]
    except ParameterError as e:
        raise PreconditionError(f"Scan range [{lo}, {hi}] for {name} is invalid: {e}") from e

    logger.info("Scanning %s over [%g, %g] with %d samples", name, lo, hi, n)
    classes = tuple(_fan_out(_scan_sample, samples, workers))
    counts = tuple(len(c) for c in classes)
    folds = tuple(
        FoldInterval(float(values[i]), float(values[i + 1]), counts[i], counts[i + 1])
        for i in range(n - 1)
        if counts[i] != counts[i + 1]
    )
    for fold in folds:
        logger.info("Count changes %d -> %d in [%g, %g]", fold.count_lo, fold.count_hi, fold.lo, fold.hi)
    return ScanResult(param=name, values=values, counts=counts, classes=classes, folds=folds)


@dataclass(frozen=True)
class RelationshipProfile:
    """How each partner responds to the other and their outlook alone."""

    attitude_1: str
    attitude_2: str
    kind: str
    outlook_1: str
    outlook_2: str

    def as_dict(self) -> dict[str, str]:
        """Return a JSON-ready mapping."""
        return {
            "attitude_1": self.attitude_1,
            "attitude_2": self.attitude_2,
            "kind": self.kind,
            "outlook_1": self.outlook_1,
            "outlook_2": self.outlook_2,
        }


def _outlook(b: float) -> str:
    if b > 0:
        return "optimist"
    if b < 0:
        return "pessimist"
    return "neutral"


def describe_relationship(p: Parameters) -> RelationshipProfile:
    """Name the coupling pattern: friends, enemies or mixed, and each outlook."""
    attitude_1 = "positive" if p.c1 > 0 else "negative"
    attitude_2 = "positive" if p.c2 > 0 else "negative"
    if attitude_1 == attitude_2:
        kind = "friends" if attitude_1 == "positive" else "enemies"
    else:
        kind = "mixed"
    return RelationshipProfile(
        attitude_1=attitude_1,
        attitude_2=attitude_2,
        kind=kind,
        outlook_1=_outlook(p.b1),
        outlook_2=_outlook(p.b2),
    )


def meeting_benefit(ss: SteadyState, p: Parameters) -> tuple[float, float]:
    """Steady-state mood minus the mood each person would reach alone."""
    alone = uninfluenced_equilibrium(p)
    return ss.x - alone.x, ss.y - alone.y
