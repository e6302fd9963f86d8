"""Pearson correlation with t-test p-value and Fisher-z interval."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from ..errors import DegenerateSeries

Z95 = 1.96


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p_two_sided: float
    ci95: tuple
    n: int


def t_two_sided_p(t, dof):
    """Two-sided tail probability of Student's t."""
    if dof == 2:
        return 1.0 - abs(t) / math.sqrt(t * t + 2.0)
    x = dof / (dof + t * t)
    return float(betainc(dof / 2.0, 0.5, x))


def pearson(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("series must be one-dimensional and of equal length")
    n = len(x)
    if n < 3:
        raise ValueError(f"need at least 3 samples, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSeries("series has zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = min(1.0, max(-1.0, r))

    if abs(r) == 1.0:
        return CorrelationResult(r, 0.0, (r, r), n)

    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    p = t_two_sided_p(t, n - 2)
    if n > 3:
        z = math.atanh(r)
        half = Z95 / math.sqrt(n - 3)
        ci = (math.tanh(z - half), math.tanh(z + half))
    else:
        # n = 3 gives an infinite z half-width.
        ci = (-1.0, 1.0)
    return CorrelationResult(r, p, ci, n)
