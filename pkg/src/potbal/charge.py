"""Finite signed charges on the plane: atoms plus uniform vertical line masses.

Positions are Python/numpy complex numbers. A :class:`ChargeDistribution`
stores its atoms as two read-only numpy arrays so that the interval sums in
:mod:`potbal.logmeasure` can be vectorised, and its line masses as a tuple of
:class:`LineMass` values. Every operation returns a new object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import LinePresent, PartialLineOverlap


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Atom:
    """A point charge ``mass`` located at ``position``."""

    position: complex
    mass: float

    def __post_init__(self) -> None:
        z = complex(self.position)
        m = float(self.mass)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"atom position must be finite, got {z!r}")
        if not math.isfinite(m) or m == 0.0:
            raise ValueError(f"atom mass must be finite and nonzero, got {m!r}")
        object.__setattr__(self, "position", z)
        object.__setattr__(self, "mass", m)


@dataclass(frozen=True)
class LineMass:
    """``coef`` times arc length on the vertical line ``Re z = x``."""

    x: float
    coef: float

    def __post_init__(self) -> None:
        x, c = float(self.x), float(self.coef)
        if not (math.isfinite(x) and math.isfinite(c)):
            raise ValueError("line abscissa and coefficient must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "coef", c)


@dataclass(frozen=True, eq=False)
class ChargeDistribution:
    """Finitely many atoms plus finitely many vertical line masses.

    Atoms keep their input order, which fixes the summation order of every
    reduction. Use :meth:`merged` to combine atoms sharing a position.
    """

    positions: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    masses: np.ndarray = field(default_factory=lambda: np.zeros(0))
    lines: tuple[LineMass, ...] = ()

    def __post_init__(self) -> None:
        z = np.array(self.positions, dtype=np.complex128).reshape(-1)
        m = np.array(self.masses, dtype=np.float64).reshape(-1)
        if z.shape != m.shape:
            raise ValueError("positions and masses must have equal length")
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(m))):
            raise ValueError("atom positions and masses must be finite")
        if np.any(m == 0.0):
            raise ValueError("atom masses must be nonzero")
        object.__setattr__(self, "positions", _frozen(z))
        object.__setattr__(self, "masses", _frozen(m))
        object.__setattr__(self, "lines", tuple(self.lines))

    # construction -----------------------------------------------------------

    @classmethod
    def empty(cls) -> ChargeDistribution:
        return cls()

    @classmethod
    def from_atoms(
        cls, atoms: Iterable[Atom | tuple[complex, float]], lines: Iterable[LineMass] = ()
    ) -> ChargeDistribution:
        pos: list[complex] = []
        mass: list[float] = []
        for a in atoms:
            if not isinstance(a, Atom):
                a = Atom(*a)
            pos.append(a.position)
            mass.append(a.mass)
        return cls(np.array(pos, dtype=complex), np.array(mass, dtype=float), tuple(lines))

    @classmethod
    def point_set(cls, points: Sequence[complex] | np.ndarray, mass: float = 1.0) -> ChargeDistribution:
        pts = np.asarray(points, dtype=complex).reshape(-1)
        return cls(pts, np.full(pts.shape, float(mass)))

    # views ------------------------------------------------------------------

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return tuple(Atom(complex(z), float(m)) for z, m in zip(self.positions, self.masses))

    @property
    def n_atoms(self) -> int:
        return int(self.positions.size)

    def is_empty(self) -> bool:
        return self.n_atoms == 0 and not self.lines

    @property
    def is_mass(self) -> bool:
        """True when every atom mass and line coefficient is nonnegative."""
        return bool(np.all(self.masses > 0)) and all(ln.coef >= 0 for ln in self.lines)

    @cached_property
    def abs_positions(self) -> np.ndarray:
        return _frozen(np.abs(self.positions))

    def total_variation(self) -> float:
        """Total variation of the atomic part (line masses have infinite variation)."""
        return math.fsum(np.abs(self.masses))

    def variation(self) -> ChargeDistribution:
        """The variation |ν|."""
        return ChargeDistribution(
            self.positions, np.abs(self.masses), tuple(LineMass(ln.x, abs(ln.coef)) for ln in self.lines if ln.coef)
        )

    def positive_part(self) -> ChargeDistribution:
        keep = self.masses > 0
        return ChargeDistribution(
            self.positions[keep], self.masses[keep], tuple(ln for ln in self.lines if ln.coef > 0)
        )

    def negative_part(self) -> ChargeDistribution:
        keep = self.masses < 0
        return ChargeDistribution(
            self.positions[keep], -self.masses[keep], tuple(LineMass(ln.x, -ln.coef) for ln in self.lines if ln.coef < 0)
        )

    # algebra ----------------------------------------------------------------

    def merged(self) -> ChargeDistribution:
        """Combine atoms at equal positions and lines on equal abscissae; drop zeros.

        First-occurrence order is preserved.
        """
        acc: dict[complex, list[float]] = {}
        for z, m in zip(self.positions.tolist(), self.masses.tolist()):
            acc.setdefault(z, []).append(m)
        pos, mass = [], []
        for z, ms in acc.items():
            total = math.fsum(ms)
            if total != 0.0:
                pos.append(z)
                mass.append(total)
        lacc: dict[float, list[float]] = {}
        for ln in self.lines:
            lacc.setdefault(ln.x, []).append(ln.coef)
        lines = tuple(LineMass(x, math.fsum(cs)) for x, cs in lacc.items() if math.fsum(cs) != 0.0)
        return ChargeDistribution(np.array(pos, dtype=complex), np.array(mass, dtype=float), lines)

    def __add__(self, other: ChargeDistribution) -> ChargeDistribution:
        if not isinstance(other, ChargeDistribution):
            return NotImplemented
        return ChargeDistribution(
            np.concatenate([self.positions, other.positions]),
            np.concatenate([self.masses, other.masses]),
            self.lines + other.lines,
        ).merged()

    def __neg__(self) -> ChargeDistribution:
        return self.scale(-1.0)

    def __sub__(self, other: ChargeDistribution) -> ChargeDistribution:
        if not isinstance(other, ChargeDistribution):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: float) -> ChargeDistribution:
        factor = float(factor)
        if factor == 0.0:
            return ChargeDistribution()
        return ChargeDistribution(
            self.positions, self.masses * factor, tuple(LineMass(ln.x, ln.coef * factor) for ln in self.lines)
        )

    def _canonical(self) -> tuple[tuple[tuple[float, float, float], ...], tuple[tuple[float, float], ...]]:
        m = self.merged()
        atoms = sorted((z.real, z.imag, w) for z, w in zip(m.positions.tolist(), m.masses.tolist()))
        lines = sorted((ln.x, ln.coef) for ln in m.lines)
        return tuple(atoms), tuple(lines)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChargeDistribution):
            return NotImplemented
        return self._canonical() == other._canonical()

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other: ChargeDistribution, atol: float = 1e-12) -> bool:
        """Equality up to ``atol`` in positions, masses and coefficients."""
        a, al = self._canonical()
        b, bl = other._canonical()
        if len(a) != len(b) or len(al) != len(bl):
            return False
        return all(max(abs(p - q) for p, q in zip(s, t)) <= atol for s, t in zip(a + al, b + bl))

    def __repr__(self) -> str:
        return f"ChargeDistribution(n_atoms={self.n_atoms}, lines={list(self.lines)!r})"


# regions ----------------------------------------------------------------------


class RegionKind(Enum):
    RIGHT_HALF = "right_half"
    RIGHT_HALF_CLOSED = "right_half_closed"
    LEFT_HALF = "left_half"
    LEFT_HALF_CLOSED = "left_half_closed"
    CONE = "cone"
    CONE_CLOSED = "cone_closed"
    STRIP = "strip"
    STRIP_CLOSED = "strip_closed"
    ANNULUS = "annulus"
    DISK = "disk"
    DISK_CLOSED = "disk_closed"
    COMPLEMENT = "complement"


class LineStatus(Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    PARTIAL = "partial"


@dataclass(frozen=True)
class Region:
    """A plane region with an exact membership test.

    Cones are the vertical double cones ``|Re z| < a|z|`` (closed: ``<=``);
    strips are ``|Re z| < b``; the annulus is ``inner < |z - center| <= outer``.
    """

    kind: RegionKind
    a: float = 0.0
    b: float = 0.0
    inner: float = 0.0
    outer: float = 0.0
    center: complex = 0j
    base: Region | None = None

    def __post_init__(self) -> None:
        k = self.kind
        if k in (RegionKind.CONE, RegionKind.CONE_CLOSED) and not 0.0 <= self.a <= 1.0:
            raise ValueError("cone aperture a must lie in [0, 1]")
        if k in (RegionKind.STRIP, RegionKind.STRIP_CLOSED) and self.b < 0.0:
            raise ValueError("strip half-width b must be nonnegative")
        if k is RegionKind.ANNULUS and not 0.0 <= self.inner < self.outer:
            raise ValueError("annulus needs 0 <= inner < outer")
        if k in (RegionKind.DISK, RegionKind.DISK_CLOSED) and self.outer < 0.0:
            raise ValueError("disk radius must be nonnegative")
        if k is RegionKind.COMPLEMENT and self.base is None:
            raise ValueError("complement needs a base region")

    @classmethod
    def right_half(cls, closed: bool = False) -> Region:
        return cls(RegionKind.RIGHT_HALF_CLOSED if closed else RegionKind.RIGHT_HALF)

    @classmethod
    def left_half(cls, closed: bool = False) -> Region:
        return cls(RegionKind.LEFT_HALF_CLOSED if closed else RegionKind.LEFT_HALF)

    @classmethod
    def cone(cls, a: float, closed: bool = False) -> Region:
        return cls(RegionKind.CONE_CLOSED if closed else RegionKind.CONE, a=float(a))

    @classmethod
    def strip(cls, b: float, closed: bool = False) -> Region:
        return cls(RegionKind.STRIP_CLOSED if closed else RegionKind.STRIP, b=float(b))

    @classmethod
    def annulus(cls, inner: float, outer: float, center: complex = 0j) -> Region:
        return cls(RegionKind.ANNULUS, inner=float(inner), outer=float(outer), center=complex(center))

    @classmethod
    def disk(cls, radius: float, center: complex = 0j, closed: bool = False) -> Region:
        kind = RegionKind.DISK_CLOSED if closed else RegionKind.DISK
        return cls(kind, outer=float(radius), center=complex(center))

    def complement(self) -> Region:
        if self.kind is RegionKind.COMPLEMENT:
            assert self.base is not None
            return self.base
        return Region(RegionKind.COMPLEMENT, base=self)

    def contains(self, z: complex | np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        x = z.real
        k = self.kind
        if k is RegionKind.RIGHT_HALF:
            return x > 0
        if k is RegionKind.RIGHT_HALF_CLOSED:
            return x >= 0
        if k is RegionKind.LEFT_HALF:
            return x < 0
        if k is RegionKind.LEFT_HALF_CLOSED:
            return x <= 0
        if k is RegionKind.CONE:
            return np.abs(x) < self.a * np.abs(z)
        if k is RegionKind.CONE_CLOSED:
            return np.abs(x) <= self.a * np.abs(z)
        if k is RegionKind.STRIP:
            return np.abs(x) < self.b
        if k is RegionKind.STRIP_CLOSED:
            return np.abs(x) <= self.b
        if k is RegionKind.ANNULUS:
            d = np.abs(z - self.center)
            return (d > self.inner) & (d <= self.outer)
        if k is RegionKind.DISK:
            return np.abs(z - self.center) < self.outer
        if k is RegionKind.DISK_CLOSED:
            return np.abs(z - self.center) <= self.outer
        assert self.base is not None
        return ~self.base.contains(z)

    def line_status(self, x: float) -> LineStatus:
        """Where the whole vertical line ``Re z = x`` sits relative to the region."""
        k = self.kind
        inside, outside, partial = LineStatus.INSIDE, LineStatus.OUTSIDE, LineStatus.PARTIAL
        if k is RegionKind.RIGHT_HALF:
            return inside if x > 0 else outside
        if k is RegionKind.RIGHT_HALF_CLOSED:
            return inside if x >= 0 else outside
        if k is RegionKind.LEFT_HALF:
            return inside if x < 0 else outside
        if k is RegionKind.LEFT_HALF_CLOSED:
            return inside if x <= 0 else outside
        if k is RegionKind.CONE:
            return outside if self.a == 0.0 else partial
        if k is RegionKind.CONE_CLOSED:
            if x == 0.0 or self.a >= 1.0:
                return inside
            return outside if self.a == 0.0 else partial
        if k is RegionKind.STRIP:
            return inside if abs(x) < self.b else outside
        if k is RegionKind.STRIP_CLOSED:
            return inside if abs(x) <= self.b else outside
        dist = abs(x - self.center.real)
        if k is RegionKind.ANNULUS:
            return outside if dist > self.outer else partial
        if k is RegionKind.DISK:
            return outside if dist >= self.outer else partial
        if k is RegionKind.DISK_CLOSED:
            return outside if dist > self.outer else partial
        assert self.base is not None
        inner = self.base.line_status(x)
        return {inside: outside, outside: inside, partial: partial}[inner]


# operations -------------------------------------------------------------------


def restrict(nu: ChargeDistribution, region: Region) -> ChargeDistribution:
    """Restriction of ``nu`` to ``region``; lines must lie wholly inside or outside."""
    keep = region.contains(nu.positions)
    lines = []
    for ln in nu.lines:
        status = region.line_status(ln.x)
        if status is LineStatus.PARTIAL:
            raise PartialLineOverlap(f"line x={ln.x} crosses the boundary of {region.kind.value}")
        if status is LineStatus.INSIDE:
            lines.append(ln)
    return ChargeDistribution(nu.positions[keep], nu.masses[keep], tuple(lines))


def shift(nu: ChargeDistribution, w: complex) -> ChargeDistribution:
    """Translate every atom by ``w``; vertical lines move by ``Re w``."""
    w = complex(w)
    return ChargeDistribution(
        nu.positions + w, nu.masses, tuple(LineMass(ln.x + w.real, ln.coef) for ln in nu.lines)
    )


def mirror_iR(nu: ChargeDistribution) -> ChargeDistribution:
    """Reflection in the imaginary axis, ``z -> -conj(z)``."""
    return ChargeDistribution(
        -np.conj(nu.positions), nu.masses, tuple(LineMass(-ln.x, ln.coef) for ln in nu.lines)
    )


def rotate_cw(nu: ChargeDistribution) -> ChargeDistribution:
    """Image charge with ``rotated(S) = nu(-iS)``: the atom at ``z`` moves to ``i*z``."""
    if nu.lines:
        raise LinePresent("rotation would turn vertical line masses horizontal")
    return ChargeDistribution(1j * nu.positions, nu.masses)


def rotate_ccw(nu: ChargeDistribution) -> ChargeDistribution:
    """Inverse of :func:`rotate_cw`: the atom at ``z`` moves to ``-i*z``."""
    if nu.lines:
        raise LinePresent("rotation would turn vertical line masses horizontal")
    return ChargeDistribution(-1j * nu.positions, nu.masses)


def _line_chord(ln: LineMass, center: complex, r: float) -> float:
    dist = abs(ln.x - center.real)
    if dist > r:
        return 0.0
    return 2.0 * math.sqrt(max(r * r - dist * dist, 0.0))


def radial_counting(nu: ChargeDistribution, center: complex = 0j, r: float = 0.0) -> float:
    """Charge of the closed disk of radius ``r`` about ``center``."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    center = complex(center)
    inside = np.abs(nu.positions - center) <= r
    total = math.fsum(nu.masses[inside])
    return total + math.fsum(ln.coef * _line_chord(ln, center, r) for ln in nu.lines)


def upper_density(nu: ChargeDistribution, p: float, r_max: float) -> float:
    """Truncated estimate of ``limsup |nu|^rad(r) / r^p``.

    The ratio is sampled at dyadic radii in the tail window
    ``sqrt(r_max) <= r <= r_max`` and its maximum is returned, so that mass
    concentrated near the origin does not dominate the estimate.
    """
    if r_max <= 1:
        raise ValueError("r_max must exceed 1")
    if p < 0:
        raise ValueError("p must be nonnegative")
    var = nu.variation()
    k_hi = int(math.floor(math.log2(r_max)))
    k_lo = int(math.ceil(0.5 * math.log2(r_max)))
    best = 0.0
    for k in range(k_lo, k_hi + 1):
        r = 2.0**k
        best = max(best, radial_counting(var, 0j, r) / r**p)
    return best
