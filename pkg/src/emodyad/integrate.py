"""Trajectory integration under parameter schedules and limit extraction."""

import io
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .model import (
    ParameterError,
    Parameters,
    ParameterSchedule,
    State,
    field_components,
)

logger = logging.getLogger(__name__)

METHODS = ("adaptive-rk45", "fixed-rk4")

# Two sample times closer than this (relative) are the same instant.
_TIME_MERGE = 1e-9


class IntegrationError(RuntimeError):
    """Raised when the adaptive stepper cannot continue."""

    def __init__(self, message: str, last_time: float) -> None:
        super().__init__(f"{message} (last good time t={last_time:.17g})")
        self.last_time = last_time


@dataclass(frozen=True)
class IntegratorConfig:
    """Stepper selection and tolerances."""

    method: str = "adaptive-rk45"
    step: float = 1e-3
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    t_end: float = 10.0
    sample_interval: float = 0.01

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ParameterError(
                f"Invalid integrator method: {self.method}. Must be one of {', '.join(METHODS)}"
            )
        for name in ("step", "abs_tol", "rel_tol", "t_end", "sample_interval"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive, got {value}")
        if self.method == "fixed-rk4" and self.step > self.t_end:
            raise ParameterError(f"step {self.step} exceeds t_end {self.t_end}")
        if self.abs_tol > 1e-2 or self.rel_tol > 1e-2:
            raise ParameterError("Integrator tolerances must not exceed 1e-2")


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution; states[i] is the (x, y) pair at times[i]."""

    times: np.ndarray
    states: np.ndarray
    segments: np.ndarray
    schedule_marks: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.times)

    def state(self, index: int) -> State:
        """Return one sample as a State."""
        x, y = self.states[index]
        return State(float(x), float(y))

    @property
    def final(self) -> State:
        """Last sampled state."""
        return self.state(-1)

    def to_csv(self) -> str:
        """Render as CSV with header t,x,y,segment."""
        buf = io.StringIO()
        buf.write("t,x,y,segment\n")
        for t, (x, y), seg in zip(self.times, self.states, self.segments):
            buf.write(f"{t:.17g},{x:.17g},{y:.17g},{int(seg)}\n")
        return buf.getvalue()


def _rhs(p: Parameters) -> Callable[[float, np.ndarray], np.ndarray]:
    def fun(_t: float, z: np.ndarray) -> np.ndarray:
        n = z.size // 2
        dx, dy = field_components(z[:n], z[n:], p)
        return np.concatenate((dx, dy))

    return fun


def rk4_step(
    fun: Callable[[float, np.ndarray], np.ndarray], t: float, z: np.ndarray, h: float
) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step."""
    k1 = fun(t, z)
    k2 = fun(t + 0.5 * h, z + 0.5 * h * k1)
    k3 = fun(t + 0.5 * h, z + 0.5 * h * k2)
    k4 = fun(t + h, z + h * k3)
    return z + h * (k1 + 2.0 * (k2 + k3) + k4) / 6.0


def sample_times(t_end: float, interval: float, switches: tuple[float, ...]) -> np.ndarray:
    """Global output grid: multiples of interval plus every switch and t_end."""
    mandatory = np.array([t for t in switches if t < t_end] + [t_end])
    n = int(math.floor(t_end / interval * (1 + _TIME_MERGE)))
    grid = np.arange(n + 1) * interval
    keep = np.array(
        [
            not np.any(np.abs(mandatory - t) <= _TIME_MERGE * max(1.0, t))
            for t in grid
        ],
        dtype=bool,
    )
    grid = grid[keep & (grid < t_end)]
    return np.unique(np.concatenate((grid, mandatory)))


def _segment_adaptive(
    p: Parameters, z0: np.ndarray, times: np.ndarray, cfg: IntegratorConfig
) -> np.ndarray:
    sol = solve_ivp(
        _rhs(p),
        (times[0], times[-1]),
        z0,
        method="RK45",
        t_eval=times,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
    )
    if sol.status == -1:
        last = float(sol.t[-1]) if sol.t.size else float(times[0])
        raise IntegrationError(f"Adaptive integration failed: {sol.message}", last)
    return sol.y.T


def _segment_fixed(
    p: Parameters, z0: np.ndarray, times: np.ndarray, cfg: IntegratorConfig
) -> np.ndarray:
    fun = _rhs(p)
    out = np.empty((times.size, 2))
    out[0] = z0
    z = z0.copy()
    for i in range(1, times.size):
        t0, t1 = times[i - 1], times[i]
        n = max(1, math.ceil((t1 - t0) / cfg.step * (1 - _TIME_MERGE)))
        h = (t1 - t0) / n
        for k in range(n):
            z = rk4_step(fun, t0 + k * h, z, h)
        out[i] = z
    return out


def integrate(
    s0: State, sched: ParameterSchedule, cfg: IntegratorConfig
) -> Trajectory:
    """Integrate from s0 over [0, cfg.t_end] following the schedule.

    Every segment is integrated on its own so no step straddles a switch.

    Raises:
        IntegrationError: If the adaptive stepper underflows.
    """
    times = sample_times(cfg.t_end, cfg.sample_interval, sched.switch_times)
    stepper = _segment_adaptive if cfg.method == "adaptive-rk45" else _segment_fixed

    all_times = [times[:1]]
    all_states = [s0.as_array()[None, :]]
    all_segments = [np.zeros(1, dtype=int)]
    marks = []
    z = s0.as_array()
    count = 1
    for index, (start, stop, params) in enumerate(sched.segments(cfg.t_end)):
        seg_times = times[(times >= start) & (times <= stop)]
        logger.debug("Segment %d on [%g, %g] with %d samples", index, start, stop, seg_times.size)
        if index > 0:
            marks.append(count - 1)
            all_segments[-1][-1] = index
        if seg_times.size < 2:
            continue
        states = stepper(params, z, seg_times, cfg)
        z = states[-1].copy()
        all_times.append(seg_times[1:])
        all_states.append(states[1:])
        all_segments.append(np.full(seg_times.size - 1, index, dtype=int))
        count += seg_times.size - 1

    return Trajectory(
        times=np.concatenate(all_times),
        states=np.concatenate(all_states),
        segments=np.concatenate(all_segments),
        schedule_marks=tuple(marks),
    )


def converge_batch(
    starts: np.ndarray, p: Parameters, tol: float = 1e-8, t_max: float = 200.0
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate many starts at once until every field norm is below tol.

    Args:
        starts: Array of shape (n, 2).
        p: Parameters.
        tol: Threshold on |F| at the final state.
        t_max: Integration horizon.

    Returns:
        Final states of shape (n, 2) and a boolean convergence flag per start.
    """
    starts = np.asarray(starts, dtype=float).reshape(-1, 2)
    n = starts.shape[0]
    z0 = np.concatenate((starts[:, 0], starts[:, 1]))

    def speeds(z: np.ndarray) -> np.ndarray:
        dx, dy = field_components(z[:n], z[n:], p)
        return np.hypot(dx, dy)

    def settled(_t: float, z: np.ndarray) -> float:
        # stop a little below tol so the final state is strictly inside it
        return float(np.max(speeds(z)) - 0.5 * tol)

    settled.terminal = True  # type: ignore[attr-defined]
    settled.direction = -1  # type: ignore[attr-defined]

    final = z0
    if settled(0.0, z0) >= 0:
        sol = solve_ivp(
            _rhs(p), (0.0, t_max), z0, method="RK45",
            rtol=1e-9, atol=1e-12, events=settled,
        )
        final = sol.y[:, -1]
        if sol.status == -1:
            logger.warning("Convergence run stopped early: %s", sol.message)
    done = speeds(final) < tol
    return np.column_stack((final[:n], final[n:])), done


def converge(
    s0: State, p: Parameters, tol: float = 1e-8, t_max: float = 200.0
) -> tuple[State, bool]:
    """Integrate until |F| < tol or t_max; non-convergence is reported, not raised."""
    final, done = converge_batch(s0.as_array()[None, :], p, tol, t_max)
    return State(float(final[0, 0]), float(final[0, 1])), bool(done[0])
