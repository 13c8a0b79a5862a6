"""Round-based model of a couple's conversation: the wife speaks first each round.

    W_{t+1} = gain_hw * I_HW(H_t) + r1 W_t + a
    H_{t+1} = gain_wh * I_WH(W_{t+1}) + r2 H_t + b

The impact functions reuse the smooth influence family; the piecewise
shapes fitted to observational scores are not modelled.
"""

import io
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .equilibria import find_scalar_roots
from .influence import Influence, InfluenceFunction
from .model import Parameters

logger = logging.getLogger(__name__)

FIXED_POINT_RESIDUAL = 1e-10


class DiscreteParamsError(ValueError):
    """Raised when the round model's parameters are invalid."""


@dataclass(frozen=True)
class DiscreteParams:
    """Inertia, drives and impact functions of the round model."""

    r1: float
    r2: float
    a: float
    b: float
    impact_hw: Influence = field(default_factory=InfluenceFunction)
    impact_wh: Influence = field(default_factory=InfluenceFunction)
    gain_hw: float = 1.0
    gain_wh: float = 1.0

    def __post_init__(self) -> None:
        for name in ("r1", "r2", "a", "b", "gain_hw", "gain_wh"):
            if not math.isfinite(getattr(self, name)):
                raise DiscreteParamsError(f"{name} must be finite, got {getattr(self, name)}")
        if abs(self.r1) >= 1 or abs(self.r2) >= 1:
            raise DiscreteParamsError(
                f"Inertia must satisfy |r| < 1, got r1={self.r1}, r2={self.r2}"
            )

    def husband_to_wife(self, h: Any) -> Any:
        """Impact of the husband's score on the wife."""
        return self.gain_hw * self.impact_hw.eval(h)

    def wife_to_husband(self, w: Any) -> Any:
        """Impact of the wife's score on the husband."""
        return self.gain_wh * self.impact_wh.eval(w)


def from_continuous(p: Parameters, h: float = 1.0) -> DiscreteParams:
    """Round model matched to the forward-Euler map of the continuous model.

    r_i = 1 - h m_i, a = h b1, b = h b2, gains h c_i; with h = 1 both
    models share their fixed points.

    Raises:
        DiscreteParamsError: If h <= 0 or |1 - h m_i| >= 1.
    """
    if not (math.isfinite(h) and h > 0):
        raise DiscreteParamsError(f"Step size must be positive, got {h}")
    return DiscreteParams(
        r1=1.0 - h * p.m1,
        r2=1.0 - h * p.m2,
        a=h * p.b1,
        b=h * p.b2,
        impact_hw=p.f1,
        impact_wh=p.f2,
        gain_hw=h * p.c1,
        gain_wh=h * p.c2,
    )


def step(w: float, h: float, dp: DiscreteParams) -> tuple[float, float]:
    """One round; the husband reacts to the wife's new score."""
    w_next = float(dp.husband_to_wife(h)) + dp.r1 * w + dp.a
    h_next = float(dp.wife_to_husband(w_next)) + dp.r2 * h + dp.b
    return w_next, h_next


def iterate(w0: float, h0: float, dp: DiscreteParams, n: int) -> np.ndarray:
    """Scores for rounds 0..n as an array of shape (n + 1, 2)."""
    if n < 1:
        raise DiscreteParamsError(f"Number of rounds must be positive, got {n}")
    out = np.empty((n + 1, 2))
    out[0] = (w0, h0)
    w, h = float(w0), float(h0)
    for t in range(1, n + 1):
        w, h = step(w, h, dp)
        out[t] = (w, h)
    return out


def sequence_to_csv(sequence: np.ndarray) -> str:
    """Render an iterate() result as CSV with header t,W,H."""
    buf = io.StringIO()
    buf.write("t,W,H\n")
    for t, (w, h) in enumerate(sequence):
        buf.write(f"{t},{w:.17g},{h:.17g}\n")
    return buf.getvalue()


def fixed_points(dp: DiscreteParams) -> list[tuple[float, float]]:
    """All rounds that repeat themselves, sorted by W.

    A fixed point has H = (gain_wh I_WH(W) + b) / (1 - r2); substituting into
    the wife's equation leaves one scalar equation in W.
    """
    sup_hw = dp.impact_hw.sup_abs
    if not math.isfinite(sup_hw):
        raise DiscreteParamsError("fixed_points needs a bounded husband-to-wife impact")
    radius = (abs(dp.a) + abs(dp.gain_hw) * sup_hw) / (1.0 - dp.r1) + 1.0

    def husband_at(w: Any) -> Any:
        return (dp.wife_to_husband(w) + dp.b) / (1.0 - dp.r2)

    def composed(w: Any) -> Any:
        return dp.husband_to_wife(husband_at(w)) + dp.a - (1.0 - dp.r1) * np.asarray(w)

    def composed_slope(w: Any) -> Any:
        h = husband_at(w)
        inner = dp.gain_wh * dp.impact_wh.deriv1(w) / (1.0 - dp.r2)
        return dp.gain_hw * dp.impact_hw.deriv1(h) * inner - (1.0 - dp.r1)

    points = []
    for w in find_scalar_roots(composed, composed_slope, -radius, radius):
        h = float(husband_at(w))
        w_res = abs(float(dp.husband_to_wife(h)) + dp.r1 * w + dp.a - w)
        h_res = abs(float(dp.wife_to_husband(w)) + dp.r2 * h + dp.b - h)
        if max(w_res, h_res) > FIXED_POINT_RESIDUAL:
            logger.warning("Dropping fixed point (%g, %g) with residual %.3g", w, h, max(w_res, h_res))
            continue
        points.append((w, h))
    logger.debug("Found %d fixed points", len(points))
    return points
