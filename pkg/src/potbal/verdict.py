"""Evidence-based boundedness verdicts from finite samples."""

from __future__ import annotations

from enum import Enum

import numpy as np

DEFAULT_SLOPE_TOL = 0.05
DEFAULT_N_MAX = 14


class Verdict(Enum):
    BOUNDED = "Bounded"
    UNBOUNDED = "Unbounded"
    INCONCLUSIVE = "Inconclusive"


def tail_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of ``y`` against ``x`` over the upper half of the samples.

    Only the upper half is fitted so that a transient at small scales does not
    masquerade as growth. Returns ``nan`` when fewer than three points remain.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    start = n // 2
    xs, ys = x[start:], y[start:]
    if xs.size < 3:
        return float("nan")
    xc = xs - xs.mean()
    denom = float(np.dot(xc, xc))
    if denom == 0.0:
        return float("nan")
    return float(np.dot(xc, ys - ys.mean()) / denom)


def slope_verdict(slope: float, slope_tol: float) -> Verdict:
    if not np.isfinite(slope):
        return Verdict.INCONCLUSIVE
    return Verdict.BOUNDED if slope < slope_tol else Verdict.UNBOUNDED
