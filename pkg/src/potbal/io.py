"""JSON encoding of distributions, boundary charges, growth functions and reports.

Floats are written with 17 significant digits so every emitted value parses
back to the same double.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .balayage import BoundaryCharge
from .charge import ChargeDistribution, LineMass
from .errors import PotbalError
from .subfun import Builtin, BuiltinName, CanonicalProduct, GrowthFunction, Scaled, Sum


class FormatError(ValueError):
    """Input JSON does not match the expected schema."""


# writer -----------------------------------------------------------------------


def _num(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _emit(obj: Any, out: list[str], indent: int | None, depth: int) -> None:
    pad = "" if indent is None else "\n" + " " * (indent * (depth + 1))
    end = "" if indent is None else "\n" + " " * (indent * depth)
    if obj is None or isinstance(obj, (bool, str)):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_num(float(obj)))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(pad + json.dumps(str(k)) + ": ")
            _emit(v, out, indent, depth + 1)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = obj.tolist() if isinstance(obj, np.ndarray) else obj
        if not items:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(items):
            if i:
                out.append(",")
            out.append(pad)
            _emit(v, out, indent, depth + 1)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any, indent: int | None = 2) -> str:
    """Serialise plain data (dicts, lists, numbers, strings) with full-precision floats."""
    out: list[str] = []
    _emit(obj, out, indent, 0)
    return "".join(out)


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from exc


# distributions ------------------------------------------------------------------


def _complex_list(zs) -> list[dict]:
    return [{"re": float(z.real), "im": float(z.imag)} for z in np.asarray(zs, dtype=complex).tolist()]


def distribution_to_dict(nu: ChargeDistribution) -> dict:
    return {
        "atoms": [
            {"re": float(z.real), "im": float(z.imag), "mass": float(m)}
            for z, m in zip(nu.positions.tolist(), nu.masses.tolist())
        ],
        "lines": [{"x": ln.x, "coef": ln.coef} for ln in nu.lines],
    }


def _field(d: dict, key: str, default: Any = None, required: bool = True) -> Any:
    if key in d:
        return d[key]
    if required:
        raise FormatError(f"missing field {key!r}")
    return default


def _real(x: Any, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormatError(f"{what} must be a number")
    return float(x)


def _point(p: Any) -> complex:
    if isinstance(p, dict):
        return complex(_real(_field(p, "re"), "re"), _real(p.get("im", 0.0), "im"))
    if isinstance(p, (list, tuple)) and len(p) == 2:
        return complex(_real(p[0], "re"), _real(p[1], "im"))
    return complex(_real(p, "point"), 0.0)


def distribution_from_dict(d: Any) -> ChargeDistribution:
    if not isinstance(d, dict):
        raise FormatError("a distribution must be a JSON object")
    atoms = _field(d, "atoms", [], required=False)
    lines = _field(d, "lines", [], required=False)
    if not isinstance(atoms, list) or not isinstance(lines, list):
        raise FormatError("atoms and lines must be arrays")
    try:
        pos = [_point(a) for a in atoms]
        mass = [_real(_field(a, "mass"), "mass") for a in atoms]
        lns = tuple(LineMass(_real(_field(l, "x"), "x"), _real(_field(l, "coef"), "coef")) for l in lines)
        return ChargeDistribution(np.array(pos, dtype=complex), np.array(mass, dtype=float), lns)
    except PotbalError:
        raise
    except (TypeError, AttributeError, ValueError) as exc:
        raise FormatError(f"malformed distribution: {exc}") from exc


# boundary charges -----------------------------------------------------------------


def boundary_to_dict(bc: BoundaryCharge) -> dict:
    return {
        "retained": distribution_to_dict(bc.retained),
        "poisson": [
            {"re": float(s.real), "im": float(s.imag), "mass": float(m), "target": float(t)}
            for s, m, t in zip(bc.sources.tolist(), bc.masses.tolist(), bc.target_of.tolist())
        ],
        "uniform": [{"x": ln.x, "coef": ln.coef} for ln in bc.uniform_terms],
        "axis_atoms": distribution_to_dict(bc.axis_atoms)["atoms"],
        "targets": list(bc.targets),
        "genus1_only": bc.genus1_only,
    }


def boundary_from_dict(d: Any) -> BoundaryCharge:
    if not isinstance(d, dict):
        raise FormatError("a boundary charge must be a JSON object")
    poisson = _field(d, "poisson", [], required=False)
    try:
        return BoundaryCharge(
            retained=distribution_from_dict(_field(d, "retained", {}, required=False)),
            sources=np.array([_point(p) for p in poisson], dtype=complex),
            masses=np.array([_real(_field(p, "mass"), "mass") for p in poisson]),
            target_of=np.array([_real(_field(p, "target"), "target") for p in poisson]),
            uniform_terms=tuple(
                LineMass(_real(_field(u, "x"), "x"), _real(_field(u, "coef"), "coef"))
                for u in _field(d, "uniform", [], required=False)
            ),
            axis_atoms=distribution_from_dict({"atoms": _field(d, "axis_atoms", [], required=False)}),
            targets=tuple(_real(x, "target") for x in _field(d, "targets", [], required=False)),
            genus1_only=bool(_field(d, "genus1_only", False, required=False)),
        )
    except PotbalError:
        raise
    except (TypeError, AttributeError, ValueError) as exc:
        raise FormatError(f"malformed boundary charge: {exc}") from exc


# growth functions ------------------------------------------------------------------


def function_to_dict(u: GrowthFunction) -> dict:
    if isinstance(u, Builtin):
        out: dict = {"variant": "builtin", "name": u.name.value}
        if u.name in (BuiltinName.HARMONIC_LINEAR, BuiltinName.LINEAR_ABS):
            out["a"] = {"re": u.a.real, "im": u.a.imag}
        if u.name is BuiltinName.HARMONIC_LINEAR:
            out["c"] = u.c
        if u.name is BuiltinName.LOG_ABS:
            out["center"] = {"re": u.center.real, "im": u.center.imag}
        return out
    if isinstance(u, CanonicalProduct):
        return {"variant": "canprod", "zeros": _complex_list(u.zeros), "genus": u.genus, "trunc": u.truncation_radius}
    if isinstance(u, Scaled):
        return {"variant": "scaled", "lam": u.lam, "g": function_to_dict(u.g)}
    if isinstance(u, Sum):
        return {"variant": "sum", "terms": [function_to_dict(t) for t in u.terms]}
    raise TypeError(f"no JSON form for {type(u).__name__}")


def function_from_dict(d: Any, default_trunc: float = 1e4) -> GrowthFunction:
    if not isinstance(d, dict):
        raise FormatError("a growth function must be a JSON object")
    variant = _field(d, "variant")
    try:
        if variant == "builtin":
            return Builtin(
                BuiltinName(_field(d, "name")),
                a=_point(d.get("a", 1.0)),
                c=_real(d.get("c", 0.0), "c"),
                center=_point(d.get("center", 0.0)),
            )
        if variant == "canprod":
            return CanonicalProduct(
                np.array([_point(z) for z in _field(d, "zeros")], dtype=complex),
                genus=int(_field(d, "genus", 1, required=False)),
                truncation_radius=_real(_field(d, "trunc", default_trunc, required=False), "trunc"),
            )
        if variant == "scaled":
            return Scaled(function_from_dict(_field(d, "g"), default_trunc), _real(_field(d, "lam"), "lam"))
        if variant == "sum":
            return Sum(tuple(function_from_dict(t, default_trunc) for t in _field(d, "terms")))
    except PotbalError:
        raise
    except (TypeError, AttributeError, ValueError) as exc:
        raise FormatError(f"malformed growth function: {exc}") from exc
    raise FormatError(f"unknown growth function variant {variant!r}")
