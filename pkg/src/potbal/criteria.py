"""Gap reports on dyadic and random interval grids, inequality scans and gauge budgets.

A gap report compares a logarithmic interval quantity of a charge with a
comparison quantity (another charge, or the axis integral of a growth
function) on intervals ``(r, R]``. Boundedness of the gaps is judged from the
running supremum per level ``N`` (intervals with ``R`` in the ``N``-th dyadic
shell) by the slope test of :mod:`potbal.verdict`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .charge import ChargeDistribution
from .errors import SignedInput, SupportViolation
from .logmeasure import Side, ell_both, ell_side
from .quadrature import DEFAULT_RTOL, integrate
from .smallsets import IntervalSet, q_of_E
from .subfun import GrowthFunction, circle_mean, j_axis, j_axis_dyadic
from .verdict import DEFAULT_N_MAX, DEFAULT_SLOPE_TOL, Verdict, slope_verdict, tail_slope

AXIS_SUM_NOTE = "axis integrand read as u(iy) + u(-iy)"


@dataclass(frozen=True, eq=False)
class CriterionReport:
    """Gaps ``lhs - rhs`` on a list of intervals with a boundedness verdict.

    ``grid`` holds the exponent pairs ``(n, N)`` for dyadic reports and is
    ``None`` for random-interval reports. ``level_sup[k]`` is the running
    supremum of the gaps over intervals whose right end lies at or below
    level ``levels[k]``.
    """

    kind: str
    grid: tuple[tuple[int, int], ...] | None
    pairs: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    gaps: np.ndarray
    levels: np.ndarray
    level_sup: np.ndarray
    running_sup: float
    slope: float
    verdict: Verdict
    n_max: int
    slope_tol: float
    notes: tuple[str, ...] = ()

    def gap_matrix(self) -> np.ndarray:
        """``D[n, N]`` for dyadic reports, ``nan`` off the grid."""
        if self.grid is None:
            raise ValueError("random-interval reports have no gap matrix")
        mat = np.full((self.n_max + 1, self.n_max + 1), np.nan)
        for (n, N), g in zip(self.grid, self.gaps):
            mat[n, N] = g
        return mat

    def to_dict(self) -> dict:
        out: dict = {
            "kind": self.kind,
            "verdict": self.verdict.value,
            "running_sup": self.running_sup,
            "slope": self.slope,
            "n_max": self.n_max,
            "slope_tol": self.slope_tol,
            "notes": list(self.notes),
            "levels": self.levels.tolist(),
            "level_sup": self.level_sup.tolist(),
        }
        if self.grid is not None:
            mat = self.gap_matrix()
            out["gap_matrix"] = [[None if math.isnan(v) else v for v in row] for row in mat.tolist()]
        out["rows"] = self.rows()
        return out

    def rows(self) -> list[dict]:
        rows = []
        for i in range(self.gaps.size):
            if self.grid is not None:
                n, N = self.grid[i]
            else:
                n, N = float(self.pairs[i, 0]), float(self.pairs[i, 1])
            rows.append({"n": n, "N": N, "ell_nu": float(self.lhs[i]), "comparison": float(self.rhs[i]), "gap": float(self.gaps[i])})
        return rows


def dyadic_grid(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponent pairs ``0 <= n < N <= n_max`` sorted by ``(n, N)``."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    ns, Ns = np.triu_indices(n_max + 1, k=1)
    return ns, Ns


def _levels_sup(levels_of: np.ndarray, gaps: np.ndarray, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    levels = np.arange(1, n_max + 1)
    per = np.full(levels.size, -np.inf)
    np.maximum.at(per, levels_of - 1, gaps)
    running = np.maximum.accumulate(per)
    return levels, running


def _assemble(
    kind: str,
    grid,
    pairs: np.ndarray,
    lhs: np.ndarray,
    rhs: np.ndarray,
    levels_of: np.ndarray,
    n_max: int,
    slope_tol: float,
    notes: tuple[str, ...] = (),
) -> CriterionReport:
    gaps = lhs - rhs
    levels, level_sup = _levels_sup(levels_of, gaps, n_max)
    finite = np.isfinite(level_sup)
    # only upward excursions threaten a finite sup; a nonpositive sup is bounded by zero
    slope = tail_slope(levels[finite], np.maximum(level_sup[finite], 0.0))
    return CriterionReport(
        kind=kind,
        grid=grid,
        pairs=pairs,
        lhs=lhs,
        rhs=rhs,
        gaps=gaps,
        levels=levels,
        level_sup=level_sup,
        running_sup=float(gaps.max()) if gaps.size else -math.inf,
        slope=slope,
        verdict=slope_verdict(slope, slope_tol),
        n_max=n_max,
        slope_tol=slope_tol,
        notes=notes,
    )


def _dyadic_report(
    kind: str,
    lhs_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    rhs_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    n_max: int,
    slope_tol: float,
    notes: tuple[str, ...] = (),
) -> CriterionReport:
    ns, Ns = dyadic_grid(n_max)
    r, R = 2.0**ns, 2.0**Ns
    grid = tuple(zip(ns.tolist(), Ns.tolist()))
    return _assemble(kind, grid, np.stack([r, R], axis=1), lhs_fn(r, R), rhs_fn(r, R), Ns, n_max, slope_tol, notes)


def _require_mass(*dists: ChargeDistribution) -> None:
    for d in dists:
        if not d.is_mass:
            raise SignedInput("a mass distribution is required")


def _dyadic_axis_integrals(M: GrowthFunction, n_max: int, rtol: float, threads: int | None):
    shells = j_axis_dyadic(M, n_max, rtol=rtol, threads=threads)
    cum = np.concatenate([[0.0], np.cumsum(shells)])

    def rhs(r: np.ndarray, R: np.ndarray) -> np.ndarray:
        n = np.round(np.log2(r)).astype(int)
        N = np.round(np.log2(R)).astype(int)
        return cum[N] - cum[n]

    return rhs


def dyadic_gap_report(
    nu: ChargeDistribution,
    M: GrowthFunction,
    n_max: int = DEFAULT_N_MAX,
    *,
    slope_tol: float = DEFAULT_SLOPE_TOL,
    rtol: float = DEFAULT_RTOL,
    threads: int | None = None,
) -> CriterionReport:
    """Gaps ``ell_sub(nu, 2^n, 2^N) - J(M, 2^n, 2^N)`` on the dyadic grid."""
    _require_mass(nu)
    rhs = _dyadic_axis_integrals(M, n_max, rtol, threads)
    return _dyadic_report(
        "dyadic", lambda r, R: ell_side(nu, r, R, Side.SUB), rhs, n_max, slope_tol, (AXIS_SUM_NOTE,)
    )


def pair_gap_report(
    nu: ChargeDistribution, mu: ChargeDistribution, n_max: int = DEFAULT_N_MAX, *, slope_tol: float = DEFAULT_SLOPE_TOL
) -> CriterionReport:
    """Gaps ``ell_sub(nu) - ell_sub(mu)`` on the dyadic grid."""
    _require_mass(nu, mu)
    return _dyadic_report(
        "pair", lambda r, R: ell_side(nu, r, R, Side.SUB), lambda r, R: ell_side(mu, r, R, Side.SUB), n_max, slope_tol
    )


def interval_gap_report(
    nu: ChargeDistribution,
    comparison: ChargeDistribution | GrowthFunction,
    n_max: int = DEFAULT_N_MAX,
    *,
    n_samples: int = 1000,
    seed: int = 0,
    slope_tol: float = DEFAULT_SLOPE_TOL,
    rtol: float = DEFAULT_RTOL,
) -> CriterionReport:
    """Gap report on random intervals ``1 <= r < R <= 2^n_max``.

    Endpoints are log-uniform; each interval is assigned the level
    ``ceil(log2 R)``. The comparison is a charge (submeasure gap) or a growth
    function (axis integral gap).
    """
    _require_mass(nu)
    rng = np.random.default_rng(seed)
    ends = np.sort(rng.uniform(0.0, n_max, size=(n_samples, 2)), axis=1)
    ends = ends[ends[:, 1] > ends[:, 0]]
    r, R = 2.0 ** ends[:, 0], 2.0 ** ends[:, 1]
    lhs = ell_side(nu, r, R, Side.SUB)
    notes: tuple[str, ...] = ()
    if isinstance(comparison, ChargeDistribution):
        _require_mass(comparison)
        rhs = ell_side(comparison, r, R, Side.SUB)
    else:
        rhs = np.array([j_axis(comparison, a, b, rtol=rtol) for a, b in zip(r, R)])
        notes = (AXIS_SUM_NOTE,)
    levels_of = np.clip(np.ceil(ends[:, 1]).astype(int), 1, n_max)
    return _assemble("intervals", None, np.stack([r, R], axis=1), lhs, rhs, levels_of, n_max, slope_tol, notes)


def mr_positive(
    Z: ChargeDistribution, W: ChargeDistribution, n_max: int = DEFAULT_N_MAX, *, slope_tol: float = DEFAULT_SLOPE_TOL
) -> CriterionReport:
    """Gaps of ``sum 1/z`` over ``r < z <= R`` for ``Z`` minus ``W``, both on the positive axis."""
    for name, D in (("Z", Z), ("W", W)):
        if D.lines or np.any(D.positions.imag != 0) or np.any(D.positions.real <= 0):
            raise SupportViolation(f"{name} must be supported on the positive real axis")
    return _dyadic_report(
        "mr", lambda r, R: ell_both(Z, r, R)[0], lambda r, R: ell_both(W, r, R)[0], n_max, slope_tol
    )


def eps_condition(
    Z: ChargeDistribution, eps: float, n_max: int = DEFAULT_N_MAX, *, slope_tol: float = DEFAULT_SLOPE_TOL
) -> tuple[float, CriterionReport]:
    """Smallest ``C >= 0`` with ``sum |Re 1/z| <= eps ln(R/r) + C`` on the dyadic grid."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    _require_mass(Z)

    def lhs(r, R):
        right, left = ell_both(Z, r, R)
        return right + left

    report = _dyadic_report("eps", lhs, lambda r, R: eps * np.log(R / r), n_max, slope_tol)
    return max(0.0, report.running_sup), report


def mu_rh_check(
    mu: ChargeDistribution, n_max: int = DEFAULT_N_MAX, *, mirrored: bool = False, slope_tol: float = DEFAULT_SLOPE_TOL
) -> CriterionReport:
    """Gaps ``ell_left - ell_right`` (or the reverse when ``mirrored``) on the dyadic grid."""
    _require_mass(mu)
    a, b = (Side.RIGHT, Side.LEFT) if mirrored else (Side.LEFT, Side.RIGHT)
    return _dyadic_report(
        "mu-lh" if mirrored else "mu-rh",
        lambda r, R: ell_side(mu, r, R, a),
        lambda r, R: ell_side(mu, r, R, b),
        n_max,
        slope_tol,
    )


def axis_gap(
    u: GrowthFunction,
    nu: ChargeDistribution,
    grid: int | Sequence[tuple[float, float]] = DEFAULT_N_MAX,
    side: Side | str = Side.SUB,
    *,
    rtol: float = DEFAULT_RTOL,
    threads: int | None = None,
) -> float:
    """``sup |J(u, r, R) - ell_side(nu, r, R)|`` over a dyadic grid (``int``) or explicit pairs."""
    side = Side(side)
    if isinstance(grid, (int, np.integer)):
        ns, Ns = dyadic_grid(int(grid))
        r, R = 2.0**ns, 2.0**Ns
        J = _dyadic_axis_integrals(u, int(grid), rtol, threads)(r, R)
    else:
        arr = np.asarray(grid, dtype=float).reshape(-1, 2)
        r, R = arr[:, 0], arr[:, 1]
        J = np.array([j_axis(u, a, b, rtol=rtol) for a, b in zip(r, R)])
    if r.size == 0:
        return 0.0
    return float(np.max(np.abs(J - ell_side(nu, r, R, side))))


# Redheffer pairing ---------------------------------------------------------------


class RedhefferCertificate(NamedTuple):
    certificate_sum: float
    verdict: Verdict
    partial_sums: np.ndarray
    pairing: tuple[int, ...]
    slope: float


def redheffer_bound(
    Z: ChargeDistribution, c: float, n_max: int = DEFAULT_N_MAX, *, slope_tol: float = DEFAULT_SLOPE_TOL
) -> RedhefferCertificate:
    """Greedy pairing certificate for the outer density of ``Z`` along the imaginary axis.

    Points are processed by increasing modulus. Each takes the unused
    nonzero integer ``m`` nearest to ``c * Im z`` from below or above,
    whichever gives the smaller ``|1/z - c/(i m)|``. Atom masses are rounded
    to multiplicities. Bounded partial sums certify density at most ``c`` on
    the sample; the certificate never bounds the density from below.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    _require_mass(Z)
    mult = np.rint(Z.masses).astype(int)
    pts = np.repeat(Z.positions, mult)
    if np.any(pts == 0):
        raise SupportViolation("points must be nonzero")
    order = np.argsort(np.abs(pts), kind="stable")
    pts = pts[order]
    used: set[int] = set()
    costs = np.zeros(pts.size)
    pairing = []
    for i, z in enumerate(pts.tolist()):
        target = c * z.imag
        lo = math.floor(target)
        hi = lo + 1
        while lo == 0 or lo in used:
            lo -= 1
        while hi == 0 or hi in used:
            hi += 1
        cost_lo = abs(1 / z - c / (1j * lo))
        cost_hi = abs(1 / z - c / (1j * hi))
        m, cost = (lo, cost_lo) if cost_lo <= cost_hi else (hi, cost_hi)
        used.add(m)
        pairing.append(m)
        costs[i] = cost
    radii = np.abs(pts)
    ks = np.arange(0, n_max + 1)
    cum = np.concatenate([[0.0], np.cumsum(costs)])
    partial = cum[np.searchsorted(radii, 2.0**ks, side="right")]
    slope = tail_slope(ks.astype(float), partial)
    return RedhefferCertificate(float(math.fsum(costs)), slope_verdict(slope, slope_tol), partial, tuple(pairing), slope)


# gauge budget --------------------------------------------------------------------


class GaugeKind(Enum):
    ZERO = "zero"
    POWER = "power"
    CUSTOM = "custom"


@dataclass(frozen=True)
class GrowthGauge:
    """Even gauge ``q(t) = scale * |t|^p`` (``power``), zero, or a user callable."""

    kind: GaugeKind = GaugeKind.ZERO
    p: float = 0.0
    scale: float = 1.0
    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GaugeKind(self.kind))
        if self.kind is GaugeKind.POWER and (self.p < 0 or self.scale < 0):
            raise ValueError("power gauges need p >= 0 and scale >= 0")
        if self.kind is GaugeKind.CUSTOM and self.func is None:
            raise ValueError("custom gauges need a callable")

    @classmethod
    def zero(cls) -> GrowthGauge:
        return cls(GaugeKind.ZERO)

    @classmethod
    def power(cls, p: float, scale: float = 1.0) -> GrowthGauge:
        return cls(GaugeKind.POWER, float(p), float(scale))

    def __call__(self, t) -> np.ndarray:
        t = np.abs(np.asarray(t, dtype=float))
        if self.kind is GaugeKind.ZERO:
            return np.zeros(t.shape)
        if self.kind is GaugeKind.POWER:
            return self.scale * t**self.p
        assert self.func is not None
        return np.asarray(self.func(t), dtype=float)


class GaugeBudget(NamedTuple):
    truncated: float
    tail: float
    total: float
    convergent: bool | None


def _power_integral(g: GrowthGauge, a: float, b: float) -> float:
    """``integral_a^b 2 q(t) / t^2 dt`` for a power or zero gauge (``b`` may be inf)."""
    if g.kind is GaugeKind.ZERO or g.scale == 0:
        return 0.0
    e = g.p - 1.0
    if e == 0.0:
        return math.inf if math.isinf(b) else 2.0 * g.scale * (math.log(b) - math.log(a))
    if math.isinf(b):
        return 2.0 * g.scale * (-(a**e) / e) if e < 0 else math.inf
    return 2.0 * g.scale * (b**e - a**e) / e


def gauge_budget(q0: GrowthGauge, q: GrowthGauge, E: IntervalSet, t_max: float, *, rtol: float = DEFAULT_RTOL) -> GaugeBudget:
    """``integral_1^t_max (2 q0 + 2 q + q_E) / t^2 dt`` with a tail estimate.

    Power gauges integrate in closed form. The ``q_E`` term is integrated
    numerically after ``t = e^s``; since ``E`` is bounded its tail is exact.
    ``convergent`` is None when a custom gauge is involved.
    """
    if t_max < 2:
        raise ValueError("t_max must be at least 2")
    truncated, tail = 0.0, 0.0
    convergent: bool | None = True
    for g in (q0, q):
        if g.kind is GaugeKind.CUSTOM:
            res = integrate(lambda s: 2.0 * g(np.exp(s)) * np.exp(-s), 0.0, math.log(t_max), rtol=rtol)
            truncated += res.value
            convergent = None
        else:
            truncated += _power_integral(g, 1.0, t_max)
            t = _power_integral(g, t_max, math.inf)
            tail += t
            if math.isinf(t) and convergent is not None:
                convergent = False
    if E:
        ends = [a for iv in E.intervals for a in iv if 1.0 < a < t_max]
        bps = [math.log(a) for a in ends]

        def qe(s: np.ndarray) -> np.ndarray:
            return np.array([q_of_E(E, float(t)) for t in np.exp(s)]) * np.exp(-s)

        truncated += integrate(qe, 0.0, math.log(t_max), breakpoints=bps, rtol=rtol).value
        top = E.intervals[-1][1]
        T = max(t_max, top)
        if top > t_max:
            tail += integrate(qe, math.log(t_max), math.log(top), breakpoints=[math.log(a) for a in ends if a > t_max], rtol=rtol).value
        m = E.measure_within(0.0, T)
        if m > 0:
            tail += m * (2.0 + math.log(T) - math.log(m)) / T
    return GaugeBudget(truncated, tail, truncated + tail, convergent)


# inequality scans ------------------------------------------------------------------


class DomainKind(Enum):
    AXIS = "axis"
    STRIP_LINES = "lines"
    STRIP_GRID = "grid"


@dataclass(frozen=True)
class ScanDomain:
    """Sample points: the axis segment ``|y| <= y_max``, the lines ``Re z = +-b``, or a strip grid."""

    kind: DomainKind
    y_max: float
    n: int = 201
    b: float = 0.0
    nx: int = 11

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", DomainKind(self.kind))
        if self.y_max <= 0 or self.n < 2:
            raise ValueError("domain needs y_max > 0 and n >= 2")
        if self.b < 0:
            raise ValueError("b must be nonnegative")

    def points(self) -> np.ndarray:
        ys = np.linspace(-self.y_max, self.y_max, self.n)
        if self.kind is DomainKind.AXIS:
            return 1j * ys
        if self.kind is DomainKind.STRIP_LINES:
            return np.concatenate([self.b + 1j * ys, -self.b + 1j * ys])
        xs = np.linspace(-self.b, self.b, self.nx)
        return (xs[None, :] + 1j * ys[:, None]).ravel()


@dataclass(frozen=True)
class PowerRadiusMean(GrowthFunction):
    """``circle_mean(g, z, |Im z|^p) + |Im z|^p``; plain ``g(z)`` where the radius is zero."""

    g: GrowthFunction
    p: float
    rtol: float = DEFAULT_RTOL

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        out = np.empty(flat.shape)
        for i, w in enumerate(flat.tolist()):
            rad = abs(w.imag) ** self.p if w.imag != 0 or self.p == 0 else 0.0
            out[i] = self.g(np.array([w]))[0] if rad == 0 else circle_mean(self.g, w, rad, rtol=self.rtol) + rad
        return out.reshape(z.shape)

    def singular_points(self, center: complex, radius: float) -> np.ndarray:
        return np.zeros(0, complex)


@dataclass(frozen=True)
class ViolationReport:
    n_sampled: int
    n_excluded: int
    excluded_measure: float
    violations: tuple[tuple[complex, float], ...]
    max_violation: float

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "n_sampled": self.n_sampled,
            "n_excluded": self.n_excluded,
            "excluded_measure": self.excluded_measure,
            "violations": [{"re": z.real, "im": z.imag, "margin": m} for z, m in self.violations],
            "max_violation": self.max_violation,
        }


def inequality_scan(
    lhs: GrowthFunction, rhs: GrowthFunction, domain: ScanDomain, E: IntervalSet | None = None
) -> ViolationReport:
    """Sample ``lhs <= rhs`` on the domain, skipping points with ``|Im z|`` in ``E``."""
    pts = domain.points()
    excluded = E.contains(np.abs(pts.imag)) if E else np.zeros(pts.shape, dtype=bool)
    kept = pts[~excluded]
    a = np.asarray(lhs(kept), dtype=float)
    b = np.asarray(rhs(kept), dtype=float)
    bad = a > b
    with np.errstate(invalid="ignore"):
        margins = np.where(bad, a - b, 0.0)
    viol = tuple((complex(z), float(m)) for z, m in zip(kept[bad], margins[bad]))
    used = E.measure_within(0.0, domain.y_max) if E else 0.0
    return ViolationReport(
        n_sampled=int(pts.size),
        n_excluded=int(excluded.sum()),
        excluded_measure=used,
        violations=viol,
        max_violation=float(margins[bad].max()) if viol else 0.0,
    )
