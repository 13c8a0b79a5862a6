"""Integration test configuration."""

import numpy as np
import pytest

from emodyad.model import Parameters

DRAWS = 200


def draw_parameters(rng: np.random.Generator, opposite: bool) -> Parameters:
    """Random parameters: opposite attitudes, or weak same-sign coupling."""
    m1, m2 = rng.uniform(0.1, 5.0, size=2)
    b1, b2 = rng.uniform(-5.0, 5.0, size=2)
    c1, c2 = rng.uniform(0.1, 5.0, size=2)
    if opposite:
        sign = rng.choice([-1.0, 1.0])
        c1, c2 = sign * c1, -sign * c2
    else:
        # keep m1 m2 - |c1 c2| at least a fifth of m1 m2
        m1, m2 = rng.uniform(0.5, 5.0, size=2)
        limit = 0.8 * m1 * m2
        if c1 * c2 >= limit:
            factor = np.sqrt(limit / (c1 * c2)) * rng.uniform(0.2, 1.0)
            c1, c2 = c1 * factor, c2 * factor
        sign = rng.choice([-1.0, 1.0])
        c1, c2 = sign * c1, sign * c2
    return Parameters(
        m1=float(m1), m2=float(m2), b1=float(b1), b2=float(b2), c1=float(c1), c2=float(c2)
    )


def draw_any(rng: np.random.Generator) -> Parameters:
    """Random parameters of either sign, any coupling strength."""
    m1, m2 = rng.uniform(0.1, 5.0, size=2)
    b1, b2 = rng.uniform(-5.0, 5.0, size=2)
    c1, c2 = rng.uniform(0.1, 5.0, size=2) * rng.choice([-1.0, 1.0], size=2)
    return Parameters(
        m1=float(m1), m2=float(m2), b1=float(b1), b2=float(b2), c1=float(c1), c2=float(c2)
    )


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for property suites."""
    return np.random.default_rng(20240607)
