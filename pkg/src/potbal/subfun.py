"""Evaluable growth functions and their integral means.

A :class:`GrowthFunction` is a (usually subharmonic) function on the plane
that may be ``-inf`` at isolated logarithmic singularities. Each variant can
list those singular points near a disk, which the quadrature routines use as
breakpoints.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .errors import IncomparableProfiles
from .quadrature import DEFAULT_RTOL, integrate

_BLOCK = 1 << 21


class GrowthFunction(ABC):
    """Base class of the evaluable variants."""

    @abstractmethod
    def __call__(self, z) -> np.ndarray:
        """Values at ``z`` (array-like of complex); ``-inf`` at singularities."""

    @abstractmethod
    def singular_points(self, center: complex, radius: float) -> np.ndarray:
        """Logarithmic singularities within ``radius`` of ``center``."""

    def tail_bound(self, z) -> np.ndarray:
        """Bound on the truncation error of :meth:`__call__` at ``z``."""
        return np.zeros(np.shape(z))


class BuiltinName(Enum):
    LOG_ABS_SIN_PI = "log_abs_sin_pi"
    ABS_RE = "abs_re"
    LINEAR_ABS = "linear_abs"
    ZERO = "zero"
    HARMONIC_LINEAR = "harmonic_linear"
    LOG_ABS = "log_abs"


def log_abs_sin_pi(z) -> np.ndarray:
    """``ln|sin(pi z)|`` evaluated without overflow for large ``|Im z|``."""
    z = np.asarray(z, dtype=complex)
    x = z.real - 2.0 * np.round(0.5 * z.real)
    ay = np.abs(z.imag)
    sx = np.sin(np.pi * x)
    s2 = sx**2
    out = np.empty(z.shape)
    small = ay < 1.0
    # hypot keeps tiny arguments from underflowing to ln 0
    with np.errstate(divide="ignore"):
        out[small] = np.log(np.hypot(sx[small], np.sinh(np.pi * ay[small])))
    big = ~small
    e = np.exp(-2.0 * np.pi * ay[big])
    out[big] = np.pi * ay[big] - math.log(2.0) + 0.5 * np.log1p(e * (4.0 * s2[big] - 2.0 + e))
    return out


@dataclass(frozen=True)
class Builtin(GrowthFunction):
    """Closed-form functions.

    ``linear_abs`` is ``a|z|``, ``harmonic_linear`` is ``Re(a z) + c`` and
    ``log_abs`` is ``ln|z - center|``.
    """

    name: BuiltinName
    a: complex = 1.0
    c: float = 0.0
    center: complex = 0j

    def __post_init__(self) -> None:
        object.__setattr__(self, "name", BuiltinName(self.name))
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "center", complex(self.center))
        if self.name is BuiltinName.LINEAR_ABS and (self.a.imag != 0 or self.a.real < 0):
            raise ValueError("linear_abs needs a real nonnegative coefficient")

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        n = self.name
        if n is BuiltinName.LOG_ABS_SIN_PI:
            return log_abs_sin_pi(z)
        if n is BuiltinName.ABS_RE:
            return np.abs(z.real)
        if n is BuiltinName.LINEAR_ABS:
            return self.a.real * np.abs(z)
        if n is BuiltinName.ZERO:
            return np.zeros(z.shape)
        if n is BuiltinName.HARMONIC_LINEAR:
            return (self.a * z).real + self.c
        with np.errstate(divide="ignore"):
            return np.log(np.abs(z - self.center))

    def singular_points(self, center: complex, radius: float) -> np.ndarray:
        n = self.name
        if n is BuiltinName.LOG_ABS:
            return np.array([self.center]) if abs(self.center - center) <= radius else np.zeros(0, complex)
        if n is BuiltinName.LOG_ABS_SIN_PI:
            center = complex(center)
            if abs(center.imag) > radius:
                return np.zeros(0, complex)
            k = np.arange(math.ceil(center.real - radius), math.floor(center.real + radius) + 1)
            pts = k.astype(complex)
            return pts[np.abs(pts - center) <= radius]
        return np.zeros(0, complex)


@dataclass(frozen=True, eq=False)
class CanonicalProduct(GrowthFunction):
    """``sum ln|1 - z/z_n| + genus * Re(z/z_n)`` over zeros with ``|z_n| <= truncation_radius``."""

    zeros: np.ndarray
    genus: int = 1
    truncation_radius: float = 1e4

    def __post_init__(self) -> None:
        zs = np.array(self.zeros, dtype=complex).reshape(-1)
        if np.any(zs == 0):
            raise ValueError("canonical product zeros must be nonzero")
        if not np.all(np.isfinite(zs)):
            raise ValueError("canonical product zeros must be finite")
        if self.genus not in (0, 1):
            raise ValueError("genus must be 0 or 1")
        if not self.truncation_radius > 0:
            raise ValueError("truncation radius must be positive")
        zs.setflags(write=False)
        object.__setattr__(self, "zeros", zs)

    @property
    def active_zeros(self) -> np.ndarray:
        return self.zeros[np.abs(self.zeros) <= self.truncation_radius]

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        out = np.zeros(flat.shape)
        zs = self.active_zeros
        if zs.size == 0 or flat.size == 0:
            return out.reshape(z.shape)
        step = max(1, _BLOCK // flat.size)
        with np.errstate(divide="ignore"):
            for k in range(0, zs.size, step):
                w = flat[:, None] / zs[None, k : k + step]
                term = 0.5 * np.log1p(w.real * w.real + w.imag * w.imag - 2.0 * w.real)
                if self.genus:
                    term += w.real
                out += term.sum(axis=1)
        return out.reshape(z.shape)

    def singular_points(self, center: complex, radius: float) -> np.ndarray:
        zs = self.active_zeros
        return zs[np.abs(zs - center) <= radius]

    def tail_bound(self, z) -> np.ndarray:
        az = np.abs(np.asarray(z, dtype=complex))
        tail = self.zeros[np.abs(self.zeros) > self.truncation_radius]
        if tail.size == 0:
            return np.zeros(az.shape)
        if self.genus:
            return az**2 * math.fsum(np.abs(tail) ** -2.0)
        return az * math.fsum(np.abs(tail) ** -1.0)


@dataclass(frozen=True)
class Scaled(GrowthFunction):
    g: GrowthFunction
    lam: float

    def __call__(self, z) -> np.ndarray:
        if self.lam == 0:
            return np.zeros(np.shape(z))
        return self.lam * self.g(z)

    def singular_points(self, center: complex, radius: float) -> np.ndarray:
        return self.g.singular_points(center, radius) if self.lam else np.zeros(0, complex)

    def tail_bound(self, z) -> np.ndarray:
        return abs(self.lam) * self.g.tail_bound(z)


@dataclass(frozen=True)
class Sum(GrowthFunction):
    terms: tuple[GrowthFunction, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))

    def __call__(self, z) -> np.ndarray:
        out = np.zeros(np.shape(z))
        for t in self.terms:
            out = out + t(z)
        return out

    def singular_points(self, center: complex, radius: float) -> np.ndarray:
        pts = [t.singular_points(center, radius) for t in self.terms]
        return np.concatenate(pts) if pts else np.zeros(0, complex)

    def tail_bound(self, z) -> np.ndarray:
        out = np.zeros(np.shape(z))
        for t in self.terms:
            out = out + t.tail_bound(z)
        return out


def evaluate(u: GrowthFunction, z):
    """Value of ``u`` at a point (float) or at an array of points."""
    arr = np.asarray(z, dtype=complex)
    vals = u(arr)
    return float(vals) if arr.ndim == 0 else vals


def evaluate_with_bound(u: GrowthFunction, z) -> tuple[np.ndarray, np.ndarray]:
    """Values together with the truncation-error bound of canonical products."""
    arr = np.asarray(z, dtype=complex)
    return u(arr), u.tail_bound(arr)


# means ------------------------------------------------------------------------


def _circle_breakpoints(u: GrowthFunction, z: complex, r: float) -> list[float]:
    pts = u.singular_points(z, 1.5 * r)
    d = np.abs(pts - z)
    near = (np.abs(d - r) <= 0.5 * r) & (d > 0)
    ang = np.mod(np.angle(pts[near] - z), 2.0 * math.pi)
    return sorted(set(ang.tolist()))


def circle_mean(u: GrowthFunction, z: complex, r: float, *, rtol: float = DEFAULT_RTOL) -> float:
    """Average of ``u`` over the circle of radius ``r`` about ``z``."""
    if not r > 0:
        raise ValueError("radius must be positive")
    z = complex(z)
    bps = _circle_breakpoints(u, z, r)
    res = integrate(lambda th: u(z + r * np.exp(1j * th)), 0.0, 2.0 * math.pi, breakpoints=bps, rtol=rtol)
    return res.value / (2.0 * math.pi)


def disk_mean(u: GrowthFunction, z: complex, r: float, *, rtol: float = DEFAULT_RTOL) -> float:
    """Area average of ``u`` over the closed disk, composed from circle means."""
    if not r > 0:
        raise ValueError("radius must be positive")
    z = complex(z)
    pts = u.singular_points(z, r)
    bps = sorted({float(d) for d in np.abs(pts - z) if 0 < d < r})
    inner = 0.1 * rtol

    def f(ts: np.ndarray) -> np.ndarray:
        return np.array([t * circle_mean(u, z, t, rtol=inner) for t in ts])

    res = integrate(f, 0.0, r, breakpoints=bps, rtol=rtol)
    return 2.0 * res.value / (r * r)


class RadialMax(NamedTuple):
    value: float
    theta: float
    spacing: float


def radial_max_sample(u: GrowthFunction, r: float, n: int = 4096) -> RadialMax:
    """Maximum of ``u`` on ``|z| = r`` from ``n`` samples plus one local refinement.

    ``spacing`` is the arc length between refined samples.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r == 0:
        return RadialMax(float(u(np.array([0j]))[0]), 0.0, 0.0)
    th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    vals = u(r * np.exp(1j * th))
    i = int(np.argmax(vals))
    h = 2.0 * math.pi / n
    fine = th[i] + np.linspace(-h, h, 65)
    fvals = u(r * np.exp(1j * fine))
    j = int(np.argmax(fvals))
    if fvals[j] >= vals[i]:
        return RadialMax(float(fvals[j]), float(fine[j] % (2 * math.pi)), r * h / 32.0)
    return RadialMax(float(vals[i]), float(th[i]), r * h / 32.0)


def radial_max(u: GrowthFunction, r: float, n: int = 4096) -> float:
    """Sampled maximum of ``u`` over the circle ``|z| = r`` (see :func:`radial_max_sample`)."""
    return radial_max_sample(u, r, n).value


def type_estimate(u: GrowthFunction, r_max: float, n: int = 4096) -> float:
    """``max radial_max(u, r)^+ / r`` over dyadic ``1 <= r <= r_max``."""
    if r_max < 16:
        raise ValueError("r_max must be at least 16")
    best = 0.0
    for k in range(0, int(math.floor(math.log2(r_max))) + 1):
        r = 2.0**k
        best = max(best, max(radial_max(u, r, n), 0.0) / r)
    return best


def j_axis(u: GrowthFunction, r: float, R: float, *, rtol: float = DEFAULT_RTOL) -> float:
    """``(1/2pi) * integral_r^R (u(iy) + u(-iy)) / y^2 dy`` with ``y = e^t``."""
    if not (0 < r < R < math.inf):
        raise ValueError("need 0 < r < R < inf")
    mid = 0.5 * (r + R)
    pts = u.singular_points(1j * mid, mid + 1.0)
    pts = np.concatenate([pts, u.singular_points(-1j * mid, mid + 1.0)])
    ap = np.abs(pts)
    near_axis = (np.abs(pts.real) <= 0.1 * ap) & (ap > r) & (ap < R)
    bps = sorted(set(np.log(ap[near_axis]).tolist()))

    def f(t: np.ndarray) -> np.ndarray:
        y = np.exp(t)
        return (u(1j * y) + u(-1j * y)) / y

    res = integrate(f, math.log(r), math.log(R), breakpoints=bps, rtol=rtol)
    return res.value / (2.0 * math.pi)


def j_axis_dyadic(u: GrowthFunction, n_max: int, *, rtol: float = DEFAULT_RTOL, threads: int | None = None) -> np.ndarray:
    """Axis integrals over ``(2^k, 2^(k+1)]`` for ``k = 0 .. n_max - 1``."""
    ks = list(range(n_max))

    def one(k: int) -> float:
        return j_axis(u, 2.0**k, 2.0 ** (k + 1), rtol=rtol)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return np.array(list(pool.map(one, ks)))
    return np.array([one(k) for k in ks])


# radius profiles -----------------------------------------------------------------


class ProfileKind(Enum):
    CONSTANT = "constant"
    POWER_FLOOR = "power_floor"


@dataclass(frozen=True)
class RadiusProfile:
    """Radial radius function with values in ``(0, 1]``.

    ``constant(r)`` is ``r`` everywhere. ``power_floor(c, R, P)`` is ``c`` on
    the closed disk of radius ``R`` and ``(1 + |z|)^(-P)`` outside it.
    """

    kind: ProfileKind
    c: float
    R: float = 0.0
    P: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ProfileKind(self.kind))
        if not 0 < self.c <= 1:
            raise ValueError("profile values must lie in (0, 1]")
        if self.R < 0 or self.P < 0:
            raise ValueError("R and P must be nonnegative")

    @classmethod
    def constant(cls, r: float) -> RadiusProfile:
        return cls(ProfileKind.CONSTANT, float(r))

    @classmethod
    def power_floor(cls, c: float, R: float, P: float) -> RadiusProfile:
        return cls(ProfileKind.POWER_FLOOR, float(c), float(R), float(P))

    def of_modulus(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        if self.kind is ProfileKind.CONSTANT:
            return np.full(rho.shape, self.c)
        return np.where(rho <= self.R, self.c, (1.0 + rho) ** -self.P)

    def __call__(self, z) -> np.ndarray:
        return self.of_modulus(np.abs(np.asarray(z, dtype=complex)))

    def sup(self) -> float:
        if self.kind is ProfileKind.CONSTANT:
            return self.c
        return max(self.c, (1.0 + self.R) ** -self.P)

    def sup_outside(self, t: float) -> float:
        """Supremum over ``|z| > t``."""
        if self.kind is ProfileKind.CONSTANT:
            return self.c
        outer = (1.0 + max(t, self.R)) ** -self.P
        return max(self.c, outer) if t < self.R else outer

    def min_on_moduli(self, rho_lo: float, rho_hi: float) -> float:
        """Minimum over points whose modulus ranges over ``[rho_lo, rho_hi]``."""
        if self.kind is ProfileKind.CONSTANT:
            return self.c
        vals = []
        if rho_lo <= self.R:
            vals.append(self.c)
        if rho_hi > self.R:
            vals.append((1.0 + rho_hi) ** -self.P)
        return min(vals)

    def check_below(self, other: RadiusProfile) -> None:
        """Raise :class:`IncomparableProfiles` unless ``self <= other`` pointwise."""
        knots = [0.0, self.R, other.R]
        rho = np.unique(np.concatenate([
            knots,
            np.nextafter(np.array(knots), np.inf),
            np.geomspace(1e-3, 1e15, 400),
        ]))
        if np.any(self.of_modulus(rho) > other.of_modulus(rho) * (1 + 1e-15)):
            raise IncomparableProfiles("radius profiles are not ordered pointwise")
        if self.kind is ProfileKind.POWER_FLOOR and other.kind is ProfileKind.POWER_FLOOR and self.P < other.P:
            raise IncomparableProfiles("the smaller profile must decay at least as fast")
        if self.kind is ProfileKind.CONSTANT and other.kind is ProfileKind.POWER_FLOOR and other.P > 0:
            raise IncomparableProfiles("a constant profile exceeds a decaying one far out")


def canonical_from_points(points: Sequence[complex] | np.ndarray, genus: int = 1, trunc: float = 1e4) -> CanonicalProduct:
    return CanonicalProduct(np.asarray(points, dtype=complex), genus, trunc)
