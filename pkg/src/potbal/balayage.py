"""Sweeping charges out of half-planes and strips onto vertical lines.

Results are symbolic. Each swept atom becomes a Poisson term on its target
line. Genus-one corrections become uniform line terms. Charges already on a
target line stay there as axis atoms. Distribution functions and densities
on the lines are closed-form arctangent and Poisson-kernel sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .charge import ChargeDistribution, LineMass, mirror_iR, shift
from .errors import (
    BlaschkeViolated,
    LeftHalfPlanePoint,
    LineInSweptRegion,
    NoSuchLine,
    OriginInSupport,
    OriginPoint,
)

DEFAULT_R0 = 1.0


# kernels ----------------------------------------------------------------------


def harmonic_measure_rh(z: complex, y1: float, y2: float) -> float:
    """Harmonic measure of the segment ``(y1, y2]`` of the imaginary axis seen from ``z``."""
    z = complex(z)
    if not y2 > y1:
        raise ValueError("need y1 < y2")
    if z.real < 0:
        raise LeftHalfPlanePoint(f"point {z} lies in the left half-plane")
    if z.real == 0:
        return 1.0 if y1 < z.imag <= y2 else 0.0
    x = z.real
    return (math.atan((y2 - z.imag) / x) - math.atan((y1 - z.imag) / x)) / math.pi


def genus1_kernel(z: complex, y1: float, y2: float) -> float:
    """Harmonic measure minus its linear part ``((y2 - y1)/pi) * Re(1/z)``."""
    z = complex(z)
    if z == 0:
        raise OriginPoint("the genus-one kernel is singular at the origin")
    return harmonic_measure_rh(z, y1, y2) - (y2 - y1) / math.pi * (1.0 / z).real


# boundary charges --------------------------------------------------------------


@dataclass(frozen=True)
class PoissonTerm:
    source: complex
    mass: float
    target: float


def _ro(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BoundaryCharge:
    """Outcome of a sweep.

    ``targets`` lists the abscissae of the lines charge was swept onto, so
    that an empty sweep still has well-defined (zero) line distributions.
    """

    retained: ChargeDistribution = field(default_factory=ChargeDistribution)
    sources: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    masses: np.ndarray = field(default_factory=lambda: np.zeros(0))
    target_of: np.ndarray = field(default_factory=lambda: np.zeros(0))
    uniform_terms: tuple[LineMass, ...] = ()
    axis_atoms: ChargeDistribution = field(default_factory=ChargeDistribution)
    targets: tuple[float, ...] = ()
    genus1_only: bool = False

    def __post_init__(self) -> None:
        s = np.array(self.sources, dtype=complex).reshape(-1)
        m = np.array(self.masses, dtype=float).reshape(-1)
        t = np.array(self.target_of, dtype=float).reshape(-1)
        if not (s.shape == m.shape == t.shape):
            raise ValueError("Poisson term arrays must have equal length")
        if np.any(s.real == t):
            raise ValueError("a Poisson source lies on its target line")
        object.__setattr__(self, "sources", _ro(s))
        object.__setattr__(self, "masses", _ro(m))
        object.__setattr__(self, "target_of", _ro(t))
        object.__setattr__(self, "uniform_terms", tuple(self.uniform_terms))
        object.__setattr__(self, "targets", tuple(sorted({float(x) for x in self.targets})))

    @property
    def poisson_terms(self) -> tuple[PoissonTerm, ...]:
        return tuple(
            PoissonTerm(complex(s), float(m), float(t)) for s, m, t in zip(self.sources, self.masses, self.target_of)
        )

    def lines(self) -> tuple[float, ...]:
        """All abscissae on which this charge has a boundary component."""
        xs = set(self.targets)
        xs.update(float(x) for x in self.target_of)
        xs.update(ln.x for ln in self.uniform_terms)
        xs.update(float(z.real) for z in self.axis_atoms.positions)
        return tuple(sorted(xs))

    def uniform_coefficient(self, x: float) -> float:
        return math.fsum(ln.coef for ln in self.uniform_terms if ln.x == x)

    def __add__(self, other: BoundaryCharge) -> BoundaryCharge:
        if not isinstance(other, BoundaryCharge):
            return NotImplemented
        return BoundaryCharge(
            retained=self.retained + other.retained,
            sources=np.concatenate([self.sources, other.sources]),
            masses=np.concatenate([self.masses, other.masses]),
            target_of=np.concatenate([self.target_of, other.target_of]),
            uniform_terms=_merge_lines(self.uniform_terms + other.uniform_terms),
            axis_atoms=self.axis_atoms + other.axis_atoms,
            targets=self.targets + other.targets,
            genus1_only=self.genus1_only and other.genus1_only,
        )

    def scale(self, factor: float) -> BoundaryCharge:
        return replace(
            self,
            retained=self.retained.scale(factor),
            masses=self.masses * factor,
            uniform_terms=tuple(LineMass(ln.x, ln.coef * factor) for ln in self.uniform_terms if ln.coef * factor),
            axis_atoms=self.axis_atoms.scale(factor),
        )

    def __neg__(self) -> BoundaryCharge:
        return self.scale(-1.0)

    def shift(self, w: complex) -> BoundaryCharge:
        w = complex(w)
        return replace(
            self,
            retained=shift(self.retained, w),
            sources=self.sources + w,
            target_of=self.target_of + w.real,
            uniform_terms=tuple(LineMass(ln.x + w.real, ln.coef) for ln in self.uniform_terms),
            axis_atoms=shift(self.axis_atoms, w),
            targets=tuple(x + w.real for x in self.targets),
        )

    def mirror(self) -> BoundaryCharge:
        return replace(
            self,
            retained=mirror_iR(self.retained),
            sources=-np.conj(self.sources),
            target_of=-self.target_of,
            uniform_terms=tuple(LineMass(-ln.x, ln.coef) for ln in self.uniform_terms),
            axis_atoms=mirror_iR(self.axis_atoms),
            targets=tuple(-x for x in self.targets),
        )

    def restricted_to_line(self, x: float) -> BoundaryCharge:
        """Boundary components on the line ``Re z = x`` only (retained part dropped)."""
        sel = self.target_of == x
        on = self.axis_atoms.positions.real == x
        return BoundaryCharge(
            sources=self.sources[sel],
            masses=self.masses[sel],
            target_of=self.target_of[sel],
            uniform_terms=tuple(ln for ln in self.uniform_terms if ln.x == x),
            axis_atoms=ChargeDistribution(self.axis_atoms.positions[on], self.axis_atoms.masses[on]),
            targets=(x,),
        )

    def __repr__(self) -> str:
        return (
            f"BoundaryCharge(retained={self.retained!r}, n_poisson={self.sources.size}, "
            f"uniform={list(self.uniform_terms)!r}, n_axis_atoms={self.axis_atoms.n_atoms}, "
            f"targets={self.targets}, genus1_only={self.genus1_only})"
        )


def _merge_lines(lines: tuple[LineMass, ...]) -> tuple[LineMass, ...]:
    acc: dict[float, list[float]] = {}
    for ln in lines:
        acc.setdefault(ln.x, []).append(ln.coef)
    return tuple(LineMass(x, math.fsum(cs)) for x, cs in acc.items() if math.fsum(cs) != 0.0)


# sweeps -----------------------------------------------------------------------


def _split_lines(nu: ChargeDistribution) -> tuple[tuple[LineMass, ...], tuple[LineMass, ...]]:
    """Lines behind the target line are retained; lines on it become uniform terms."""
    behind, on = [], []
    for ln in nu.lines:
        if ln.x > 0:
            raise LineInSweptRegion(f"line x={ln.x} lies in the swept half-plane")
        (on if ln.x == 0 else behind).append(ln)
    return tuple(behind), tuple(on)


def _sweep_right(nu: ChargeDistribution, genus0_radius: float) -> BoundaryCharge:
    """Sweep the open right half-plane onto the imaginary axis.

    Atoms with ``|z| < genus0_radius`` use the plain Poisson kernel; the
    others also receive the linear genus-one correction.
    """
    behind, on = _split_lines(nu)
    z, m = nu.positions, nu.masses
    rh = z.real > 0
    axis = z.real == 0
    lh = z.real < 0
    outer = np.abs(z) >= genus0_radius
    if np.any(outer & (z == 0)):
        raise OriginInSupport("genus-one sweeping needs the origin outside the support")
    blaschke = math.fsum(np.abs(m[rh & (np.abs(z) > 1)]) * (1.0 / z[rh & (np.abs(z) > 1)]).real)
    if not math.isfinite(blaschke):
        raise BlaschkeViolated("right half-plane Blaschke sum is not finite")
    corr_sel = rh & outer
    coef = -math.fsum(m[corr_sel] * (1.0 / z[corr_sel]).real) / math.pi
    uniform = list(on)
    if coef != 0.0:
        uniform.append(LineMass(0.0, coef))
    return BoundaryCharge(
        retained=ChargeDistribution(z[lh], m[lh], behind),
        sources=z[rh],
        masses=m[rh],
        target_of=np.zeros(int(rh.sum())),
        uniform_terms=_merge_lines(tuple(uniform)),
        axis_atoms=ChargeDistribution(z[axis], m[axis]),
        targets=(0.0,),
    )


def sweep0(nu: ChargeDistribution) -> BoundaryCharge:
    """Genus-zero sweep of the open right half-plane onto the imaginary axis."""
    return _sweep_right(nu, math.inf)


def sweep1(nu: ChargeDistribution) -> BoundaryCharge:
    """Genus-one sweep: the genus-zero sweep plus a uniform correction on the axis."""
    return _sweep_right(nu, 0.0)


def sweep01(nu: ChargeDistribution, r0: float = DEFAULT_R0) -> BoundaryCharge:
    """Genus zero inside the open disk of radius ``r0``, genus one outside it."""
    if not r0 > 0:
        raise ValueError("r0 must be positive")
    return _sweep_right(nu, r0)


def sweep_left(nu: ChargeDistribution, r0: float = DEFAULT_R0, genus1: bool = False) -> BoundaryCharge:
    """Mirror image of :func:`sweep01`: sweeps the open left half-plane."""
    inner = 0.0 if genus1 else r0
    return _sweep_right(mirror_iR(nu), inner).mirror()


def strip_genus1_condition(nu: ChargeDistribution, b: float, r0: float) -> bool:
    """True when no charge near ``+-b`` needs the genus-zero treatment.

    The right line needs no atom in ``(b + r0*D)`` with ``Re z > b``; the left
    line needs the mirror condition. Atoms exactly at ``+-b`` are also
    excluded because the genus-one kernel is singular there.
    """
    z = nu.positions
    right = (z.real > b) & (np.abs(z - b) < r0)
    left = (z.real < -b) & (np.abs(z + b) < r0)
    at_ends = (z == b) | (z == -b)
    return not bool(np.any(right | left | at_ends))


def sweep_strip(nu: ChargeDistribution, b: float, r0: float = DEFAULT_R0) -> BoundaryCharge:
    """Sweep charge outside the closed strip ``|Re z| <= b`` onto the lines ``Re z = +-b``.

    Composition of five primitive steps: shift by ``-b``, sweep the right
    half-plane, shift by ``+2b``, sweep the left half-plane, shift by ``-b``.
    """
    if b < 0:
        raise ValueError("b must be nonnegative")
    genus1 = strip_genus1_condition(nu, b, r0)
    inner = 0.0 if genus1 else r0
    # every step fixes the open strip; keeping it out of the shifts avoids round-off drift onto the lines
    z = nu.positions
    inside = np.abs(z.real) < b
    kept = ChargeDistribution(z[inside], nu.masses[inside], tuple(ln for ln in nu.lines if abs(ln.x) < b))
    nu = ChargeDistribution(z[~inside], nu.masses[~inside], tuple(ln for ln in nu.lines if abs(ln.x) >= b))
    step1 = shift(nu, -b)
    step2 = _sweep_right(step1, inner)
    step3 = step2.shift(2 * b)
    left = sweep_left(step3.retained, r0, genus1=genus1)
    step4 = replace(step3, retained=ChargeDistribution()) + left
    step5 = step4.shift(-b)
    return replace(step5, retained=step5.retained + kept, genus1_only=genus1)


# line distribution functions ----------------------------------------------------


def _require_line(bc: BoundaryCharge, x: float) -> None:
    if x not in bc.lines():
        raise NoSuchLine(f"no boundary component on the line x={x}")


def boundary_cdf(bc: BoundaryCharge, line_abscissa: float, y) -> np.ndarray | float:
    """Distribution function on the line, normalised by ``F(0) = 0``.

    ``F(y2) - F(y1)`` is the charge of the segment ``(y1, y2]``.
    """
    x = float(line_abscissa)
    _require_line(bc, x)
    yy = np.asarray(y, dtype=float)
    scalar = yy.ndim == 0
    yy = np.atleast_1d(yy)
    sel = bc.target_of == x
    s, m = bc.sources[sel], bc.masses[sel]
    d = np.abs(s.real - x)
    h = s.imag
    out = np.zeros(yy.shape)
    if s.size:
        # a source very close to its line overflows to +-inf, where arctan has the right limit
        with np.errstate(over="ignore", divide="ignore"):
            ang = np.arctan((yy[:, None] - h[None, :]) / d[None, :]) + np.arctan(h / d)[None, :]
        out += (ang @ m) / math.pi
    c = bc.uniform_coefficient(x)
    if c:
        out += c * yy
    on = bc.axis_atoms.positions.real == x
    if np.any(on):
        ay = bc.axis_atoms.positions.imag[on]
        am = bc.axis_atoms.masses[on]
        pos = (ay[None, :] > 0) & (ay[None, :] <= yy[:, None])
        neg = (ay[None, :] <= 0) & (ay[None, :] > yy[:, None])
        out += pos.astype(float) @ am - neg.astype(float) @ am
    return float(out[0]) if scalar else out


def boundary_increment(bc: BoundaryCharge, line_abscissa: float, y1: float, y2: float) -> float:
    """Charge of the segment ``(y1, y2]`` of the line."""
    F = boundary_cdf(bc, line_abscissa, np.array([y1, y2]))
    return float(F[1] - F[0])


def boundary_density(bc: BoundaryCharge, line_abscissa: float, y) -> np.ndarray | float:
    """Absolutely continuous density on the line (axis atoms excluded)."""
    x = float(line_abscissa)
    _require_line(bc, x)
    yy = np.asarray(y, dtype=float)
    scalar = yy.ndim == 0
    yy = np.atleast_1d(yy)
    sel = bc.target_of == x
    s, m = bc.sources[sel], bc.masses[sel]
    d = np.abs(s.real - x)
    out = np.full(yy.shape, bc.uniform_coefficient(x))
    if s.size:
        ker = d[None, :] / (d[None, :] ** 2 + (yy[:, None] - s.imag[None, :]) ** 2)
        out += (ker @ m) / math.pi
    return float(out[0]) if scalar else out


def density_sample_grid(bc: BoundaryCharge, line_abscissa: float, y_max: float, n_per_source: int = 64) -> np.ndarray:
    """Sorted sample heights on ``[-y_max, y_max]`` resolving every Poisson bump."""
    x = float(line_abscissa)
    sel = bc.target_of == x
    s = bc.sources[sel]
    d = np.abs(s.real - x)
    theta = np.linspace(-0.5 * math.pi, 0.5 * math.pi, n_per_source + 2)[1:-1]
    pieces = [np.linspace(-y_max, y_max, 2001)]
    if s.size:
        pieces.append((s.imag[:, None] + d[:, None] * np.tan(theta)[None, :]).ravel())
        pieces.append(s.imag)
    ys = np.concatenate(pieces)
    ys = ys[np.abs(ys) <= y_max]
    return np.unique(ys)


def line_total_variation(bc: BoundaryCharge, line_abscissa: float) -> float:
    """Total variation of the boundary charge carried by one line.

    Sign changes of the density are located on a grid that resolves every
    Poisson term and refined by bracketing; the variation is then a sum of
    closed-form distribution-function increments.
    """
    x = float(line_abscissa)
    if bc.uniform_coefficient(x) != 0.0:
        return math.inf
    sel = bc.target_of == x
    on = bc.axis_atoms.positions.real == x
    atoms_tv = math.fsum(np.abs(bc.axis_atoms.masses[on]))
    if not np.any(sel):
        return atoms_tv
    sub = bc.restricted_to_line(x)
    sub = replace(sub, axis_atoms=ChargeDistribution())
    s = sub.sources
    span = float(np.max(np.abs(s.imag)) + np.max(np.abs(s.real - x))) * 1e3 + 1.0
    ys = density_sample_grid(sub, x, span, n_per_source=256)
    f = boundary_density(sub, x, ys)
    cuts = [-math.inf]
    for i in np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]:
        cuts.append(brentq(lambda t: boundary_density(sub, x, t), ys[i], ys[i + 1], xtol=1e-14))
    cuts.append(math.inf)
    F = boundary_cdf(sub, x, np.array(cuts))
    return math.fsum(np.abs(np.diff(F))) + atoms_tv


def total_variation(bc: BoundaryCharge) -> float:
    """Total variation of retained atoms plus every line component."""
    tv = bc.retained.total_variation()
    if bc.retained.lines:
        return math.inf
    return tv + math.fsum(line_total_variation(bc, x) for x in bc.lines())
