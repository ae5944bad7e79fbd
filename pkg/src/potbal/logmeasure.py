"""Logarithmic interval functions of a charge and Lindelöf-sum reports.

For a charge ``nu`` and ``0 < r < R`` the right and left logarithmic
functions integrate ``max(Re(1/z), 0)`` and ``max(-Re(1/z), 0)`` over the
annulus ``r < |z| <= R``. Atoms are summed through sorted radii and prefix
sums; line masses use their arctangent antiderivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .charge import ChargeDistribution, LineMass
from .errors import SignedInput
from .verdict import DEFAULT_SLOPE_TOL, Verdict, slope_verdict, tail_slope


class Side(Enum):
    RIGHT = "rh"
    LEFT = "lh"
    SUB = "sub"


def _check_interval(r: float, R: float) -> None:
    if not (0.0 < r < R < math.inf):
        raise ValueError(f"need 0 < r < R < inf, got r={r}, R={R}")


def _recip_real(z: np.ndarray) -> np.ndarray:
    out = np.zeros(z.shape)
    nz = z != 0
    out[nz] = (1.0 / z[nz]).real
    return out


def _line_right_left(ln: LineMass, r: np.ndarray, R: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Contribution of one line to the right and left functions on ``(r, R]``."""
    s = abs(ln.x)
    zero = np.zeros(np.broadcast(r, R).shape)
    if s == 0.0 or ln.coef == 0.0:
        return zero, zero
    t_lo = np.sqrt(np.maximum(r * r - s * s, 0.0))
    t_hi = np.sqrt(np.maximum(R * R - s * s, 0.0))
    val = 2.0 * ln.coef * (np.arctan(t_hi / s) - np.arctan(t_lo / s))
    val = np.maximum(val, 0.0) if ln.coef > 0 else np.minimum(val, 0.0)
    return (val, zero) if ln.x > 0 else (zero, val)


@dataclass(frozen=True)
class _PrefixTable:
    radii: np.ndarray
    # suffix sums over atoms sorted by radius
    cum_right: np.ndarray
    cum_left: np.ndarray

    @classmethod
    def build(cls, nu: ChargeDistribution) -> _PrefixTable:
        rad = nu.abs_positions
        order = np.argsort(rad, kind="stable")
        w = nu.masses * _recip_real(nu.positions)
        right = np.where(w > 0, w, 0.0)[order]
        left = np.where(w < 0, -w, 0.0)[order]
        # accumulate from the outside in: huge terms near the origin must not swamp outer annuli
        cr = np.concatenate([np.cumsum(right[::-1])[::-1], [0.0]])
        cl = np.concatenate([np.cumsum(left[::-1])[::-1], [0.0]])
        return cls(rad[order], cr, cl)

    def sums(self, r: np.ndarray, R: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        i = np.searchsorted(self.radii, r, side="right")
        j = np.searchsorted(self.radii, R, side="right")
        return self.cum_right[i] - self.cum_right[j], self.cum_left[i] - self.cum_left[j]


def _table(nu: ChargeDistribution) -> _PrefixTable:
    cache = nu.__dict__.get("_potbal_prefix")
    if cache is None:
        cache = _PrefixTable.build(nu)
        nu.__dict__["_potbal_prefix"] = cache
    return cache


def ell_both(nu: ChargeDistribution, r, R) -> tuple[np.ndarray, np.ndarray]:
    """Right and left logarithmic functions on arrays of intervals ``(r, R]``."""
    r = np.asarray(r, dtype=float)
    R = np.asarray(R, dtype=float)
    if np.any(~(r > 0)) or np.any(~(R > r)) or np.any(~np.isfinite(R)):
        raise ValueError("need 0 < r < R < inf for every interval")
    if nu.n_atoms:
        right, left = _table(nu).sums(r, R)
    else:
        right = np.zeros(np.broadcast(r, R).shape)
        left = right.copy()
    for ln in nu.lines:
        lr, ll = _line_right_left(ln, r, R)
        right = right + lr
        left = left + ll
    return right, left


def ell_right(nu: ChargeDistribution, r: float, R: float) -> float:
    """Integral of ``Re+(1/z)`` over the annulus ``r < |z| <= R``."""
    _check_interval(r, R)
    return float(ell_both(nu, r, R)[0])


def ell_left(nu: ChargeDistribution, r: float, R: float) -> float:
    """Integral of ``Re-(1/z)`` over the annulus ``r < |z| <= R``."""
    _check_interval(r, R)
    return float(ell_both(nu, r, R)[1])


def _require_mass(nu: ChargeDistribution) -> None:
    if not nu.is_mass:
        raise SignedInput("the logarithmic submeasure is defined for mass distributions only")


def ell_sub(nu: ChargeDistribution, r: float, R: float) -> float:
    """The two-sided submeasure ``max(ell_left, ell_right)``."""
    _require_mass(nu)
    _check_interval(r, R)
    right, left = ell_both(nu, r, R)
    return float(max(right, left))


def ell_side(nu: ChargeDistribution, r, R, side: Side) -> np.ndarray:
    """Vectorised evaluation of the chosen side over arrays of intervals."""
    if side is Side.SUB:
        _require_mass(nu)
    right, left = ell_both(nu, r, R)
    if side is Side.RIGHT:
        return right
    if side is Side.LEFT:
        return left
    return np.maximum(right, left)


class CharLog(NamedTuple):
    value: float
    convergent: bool


def char_log_right(
    nu: ChargeDistribution, R: float, r_floor: float = 1e-6, *, tol: float = 1e-9, schedule: int = 20
) -> CharLog:
    """Right characteristic logarithm ``ell_right(nu, r_floor, R)`` with a convergence flag.

    The flag inspects the variation ``|nu|`` on the shells
    ``(r_floor/2^(k+1), r_floor/2^k]`` for ``k < schedule`` together with the
    residual disk below the last radius. It is false when any of the last five
    of these contributions exceeds ``tol``.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    value = ell_right(nu, r_floor, R) if r_floor < R else 0.0
    var = nu.variation()
    radii = r_floor / 2.0 ** np.arange(schedule + 1)
    shells, _ = ell_both(var, radii[1:], radii[:-1])
    below = radii[-1]
    pos = var.positions
    inner = (var.abs_positions <= below) & (var.abs_positions > 0)
    residual = math.fsum(var.masses[inner] * np.maximum(_recip_real(pos[inner]), 0.0))
    increments = np.concatenate([shells, [residual]])
    convergent = bool(np.all(increments[-5:] <= tol))
    return CharLog(float(value), convergent)


class LindelofKind(Enum):
    R = "R"
    IR = "iR"
    FULL = "full"


@dataclass(frozen=True)
class LindelofReport:
    kind: LindelofKind
    sup_abs: float
    samples: tuple[tuple[float, float], ...]
    verdict: Verdict
    r_max: float
    slope: float
    slope_tol: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "sup_abs": self.sup_abs,
            "samples": [{"r": r, "value": v} for r, v in self.samples],
            "verdict": self.verdict.value,
            "r_max": self.r_max,
            "slope": self.slope,
            "slope_tol": self.slope_tol,
        }


def lindelof_sums(nu: ChargeDistribution, radii: np.ndarray) -> np.ndarray:
    """Complex sums ``integral of 1/z`` over ``1 < |z| <= r`` for each radius."""
    radii = np.asarray(radii, dtype=float)
    rad = nu.abs_positions
    order = np.argsort(rad, kind="stable")
    sel = rad[order] > 1.0
    rs = rad[order][sel]
    w = (nu.masses[order] / np.where(rad[order] > 0, nu.positions[order], 1.0))[sel]
    cum = np.concatenate([[0j], np.cumsum(w)])
    out = cum[np.searchsorted(rs, radii, side="right")]
    if nu.lines:
        ones = np.ones_like(radii)
        right, left = np.zeros_like(radii), np.zeros_like(radii)
        ok = radii > 1.0
        for ln in nu.lines:
            lr, ll = _line_right_left(ln, ones[ok], radii[ok])
            right[ok] += lr
            left[ok] += ll
        out = out + (right - left)
    return out


def lindelof_report(
    nu: ChargeDistribution, kind: LindelofKind | str, r_max: float, slope_tol: float = DEFAULT_SLOPE_TOL
) -> LindelofReport:
    """Lindelöf sums sampled at dyadic radii ``2, 4, ..., <= r_max`` with a slope verdict."""
    kind = LindelofKind(kind)
    if r_max < 2:
        raise ValueError("r_max must be at least 2")
    ks = np.arange(1, int(math.floor(math.log2(r_max))) + 1)
    radii = 2.0**ks
    sums = lindelof_sums(nu, radii)
    if kind is LindelofKind.R:
        vals = sums.real
    elif kind is LindelofKind.IR:
        vals = sums.imag
    else:
        vals = np.abs(sums)
    absvals = np.abs(vals)
    slope = tail_slope(np.log(radii), absvals)
    return LindelofReport(
        kind=kind,
        sup_abs=float(absvals.max()) if absvals.size else 0.0,
        samples=tuple((float(r), float(v)) for r, v in zip(radii, vals)),
        verdict=slope_verdict(slope, slope_tol),
        r_max=float(r_max),
        slope=slope,
        slope_tol=slope_tol,
    )
