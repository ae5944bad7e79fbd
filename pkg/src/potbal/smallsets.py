"""Interval sets, the exceptional-set gauge and variable-radius Hausdorff contents."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .subfun import RadiusProfile


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of closed intervals ``[lo, hi]``, stored sorted and disjoint."""

    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        raw = sorted((float(a), float(b)) for a, b in self.intervals)
        merged: list[list[float]] = []
        for a, b in raw:
            if not (math.isfinite(a) and math.isfinite(b)) or b < a:
                raise ValueError(f"invalid interval [{a}, {b}]")
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        object.__setattr__(self, "intervals", tuple((a, b) for a, b in merged))

    @classmethod
    def of(cls, *pairs: tuple[float, float]) -> IntervalSet:
        return cls(tuple(pairs))

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def measure(self) -> float:
        return math.fsum(b - a for a, b in self.intervals)

    def clip(self, lo: float, hi: float) -> IntervalSet:
        """Intersection with ``[lo, hi]``."""
        out = []
        for a, b in self.intervals:
            a2, b2 = max(a, lo), min(b, hi)
            if a2 <= b2:
                out.append((a2, b2))
        return IntervalSet(tuple(out))

    def measure_within(self, lo: float, hi: float) -> float:
        return self.clip(lo, hi).measure()

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=bool)
        for a, b in self.intervals:
            out |= (x >= a) & (x <= b)
        return out

    def union(self, other: IntervalSet) -> IntervalSet:
        return IntervalSet(self.intervals + other.intervals)


def q_of_E(E: IntervalSet, r: float) -> float:
    """``m * ln(e r / m)`` with ``m`` the length of ``E`` within ``[0, r]``; zero when ``m = 0``."""
    if not r > 0:
        raise ValueError("r must be positive")
    m = E.measure_within(0.0, r)
    if m <= 0.0:
        return 0.0
    return m * (1.0 + math.log(r) - math.log(m))


# contents ---------------------------------------------------------------------


def content_weight(d: float) -> float:
    """Normalising factor ``pi^(d/2) / Gamma(1 + d/2)`` of a ``d``-dimensional disk."""
    return math.pi ** (d / 2.0) / math.gamma(1.0 + d / 2.0)


@dataclass(frozen=True)
class CoverInput:
    """Either a finite point set or an interval set on the horizontal line ``Im z = line_y``."""

    points: np.ndarray | None = None
    intervals: IntervalSet | None = None
    line_y: float = 0.0

    def __post_init__(self) -> None:
        if (self.points is None) == (self.intervals is None):
            raise ValueError("give exactly one of points or intervals")
        if self.points is not None:
            pts = np.array(self.points, dtype=complex).reshape(-1)
            pts.setflags(write=False)
            object.__setattr__(self, "points", pts)

    @classmethod
    def of_points(cls, pts: Iterable[complex]) -> CoverInput:
        return cls(points=np.array(list(pts), dtype=complex))

    @classmethod
    def of_intervals(cls, E: IntervalSet, line_y: float = 0.0) -> CoverInput:
        return cls(intervals=E, line_y=float(line_y))

    def is_empty(self) -> bool:
        if self.points is not None:
            return self.points.size == 0
        assert self.intervals is not None
        return not self.intervals


class ContentEstimate(NamedTuple):
    upper: float
    lower: float
    exact: bool


def _modulus_range(lo: float, hi: float, y: float) -> tuple[float, float]:
    near = 0.0 if lo <= 0.0 <= hi else min(abs(lo), abs(hi))
    far = max(abs(lo), abs(hi))
    return math.hypot(near, y), math.hypot(far, y)


def _cluster_cost(span: float, rho: float, d: float, w: float) -> float:
    if span == 0.0:
        return 0.0
    n = math.ceil(span / (2.0 * rho) * (1 - 1e-15))
    return n * w * (span / (2.0 * n)) ** d


def _subunit_interval_upper(E: IntervalSet, y: float, d: float, radius: RadiusProfile) -> float:
    """Cheapest cover by rows of equal disks, one row per run of consecutive intervals."""
    ivs = [iv for iv in E.intervals if iv[1] > iv[0]]
    w = content_weight(d)
    best = [0.0] + [math.inf] * len(ivs)
    for k in range(1, len(ivs) + 1):
        for j in range(k, 0, -1):
            lo, hi = ivs[j - 1][0], ivs[k - 1][1]
            rho = radius.min_on_moduli(*_modulus_range(lo, hi, y))
            best[k] = min(best[k], best[j - 1] + _cluster_cost(hi - lo, rho, d, w))
    return best[-1]


def hausdorff_content(S: CoverInput, d: float, radius: RadiusProfile) -> ContentEstimate:
    """Bounds on the ``d``-dimensional Hausdorff content with radii capped by ``radius``.

    Finite point sets have content zero for every ``d > 0``. On a line, the
    one-dimensional content equals the total length, contents with ``d > 1``
    vanish, and for ``d < 1`` the upper bound is the cheapest cover by rows of
    equal disks over runs of consecutive intervals. The matching lower bound
    uses the fact that a disk of radius ``s`` meets the line in length at most
    ``2s``. All contents vanish for ``d > 2``.
    """
    if not d > 0:
        raise ValueError("dimension d must be positive")
    if d > 2 or S.is_empty() or S.points is not None:
        return ContentEstimate(0.0, 0.0, True)
    assert S.intervals is not None
    m = S.intervals.measure()
    if d > 1 or m == 0.0:
        return ContentEstimate(0.0, 0.0, True)
    if d == 1:
        return ContentEstimate(m, m, True)
    upper = _subunit_interval_upper(S.intervals, S.line_y, d, radius)
    lower = 0.5 * content_weight(d) * radius.sup() ** (d - 1.0) * m
    return ContentEstimate(upper, lower, math.isclose(upper, lower, rel_tol=1e-12))


def greedy_cover(points, d: float, radius: RadiusProfile) -> float:
    """Value of the greedy cover by disks of the largest admissible radius.

    Each uncovered point, in lexicographic order, receives a disk of radius
    ``radius(p)`` centred at itself. The result is an admissible cover value
    and so bounds the content from above, but it ignores shrinking disks.
    """
    pts = sorted(np.asarray(points, dtype=complex).tolist(), key=lambda z: (z.real, z.imag))
    w = content_weight(d)
    covered = [False] * len(pts)
    total = 0.0
    for i, p in enumerate(pts):
        if covered[i]:
            continue
        rho = float(radius(np.array([p]))[0])
        total += w * rho**d
        for j in range(i, len(pts)):
            if abs(pts[j] - p) <= rho:
                covered[j] = True
    return total


class ChainCheck(NamedTuple):
    holds: bool
    upper_small: float
    upper_large: float


def content_chain_check(S: CoverInput, d: float, r_profile: RadiusProfile, t_profile: RadiusProfile) -> ChainCheck:
    """Check that the content with the smaller radius cap is at least the other one."""
    r_profile.check_below(t_profile)
    small = hausdorff_content(S, d, r_profile).upper
    large = hausdorff_content(S, d, t_profile).upper
    return ChainCheck(small >= large - 1e-12 * max(1.0, abs(large)), small, large)


class BoundCheck(NamedTuple):
    holds: bool | None
    content_upper: float
    content_lower: float
    bound: float


def exceptional_bound_check(E: CoverInput, d: float, radius: RadiusProfile, t: float) -> BoundCheck:
    """Compare the content of ``E`` outside the disk ``|z| <= t`` with ``sup_{|z|>t} radius``.

    ``holds`` is True when the upper bound passes, False when the lower bound
    fails, and None when the two bounds straddle the threshold.
    """
    if E.points is not None:
        outside = CoverInput(points=E.points[np.abs(E.points) > t])
    else:
        assert E.intervals is not None
        y = E.line_y
        if t <= abs(y):
            clipped = E.intervals
        else:
            half = math.sqrt(t * t - y * y)
            left = E.intervals.clip(-math.inf, -half)
            right = E.intervals.clip(half, math.inf)
            clipped = left.union(right)
        outside = CoverInput(intervals=clipped, line_y=y)
    est = hausdorff_content(outside, d, radius)
    bound = radius.sup_outside(t)
    if est.upper <= bound:
        verdict: bool | None = True
    elif est.lower > bound:
        verdict = False
    else:
        verdict = None
    return BoundCheck(verdict, est.upper, est.lower, bound)
