"""Truncated standard point distributions.

Generator strings have the form ``integers:N``, ``ray:STEP:N`` and
``lattice-i:N``, each optionally followed by ``:MASS``.
"""

from __future__ import annotations

import numpy as np

from .charge import ChargeDistribution


def integers(n: int, mass: float = 1.0) -> ChargeDistribution:
    """Atoms at the nonzero integers ``0 < |k| <= n``."""
    k = np.concatenate([np.arange(1, n + 1), -np.arange(1, n + 1)]).astype(float)
    return ChargeDistribution(k.astype(complex), np.full(k.size, float(mass)))


def ray(step: complex, n: int, mass: float = 1.0) -> ChargeDistribution:
    """Atoms at ``k * step`` for ``k = 1 .. n``."""
    k = np.arange(1, n + 1)
    return ChargeDistribution(k * complex(step), np.full(k.size, float(mass)))


def lattice_i(n: int, mass: float = 1.0) -> ChargeDistribution:
    """Atoms at ``i k`` for ``0 < |k| <= n``."""
    return ChargeDistribution(1j * integers(n).positions, np.full(2 * n, float(mass)))


def generate(text: str) -> ChargeDistribution:
    """Materialise a generator string; raises ``ValueError`` when malformed."""
    parts = text.split(":")
    name, args = parts[0], parts[1:]
    try:
        if name == "integers" and len(args) in (1, 2):
            return integers(int(args[0]), *(float(a) for a in args[1:]))
        if name == "ray" and len(args) in (2, 3):
            return ray(complex(args[0].replace("i", "j")), int(args[1]), *(float(a) for a in args[2:]))
        if name == "lattice-i" and len(args) in (1, 2):
            return lattice_i(int(args[0]), *(float(a) for a in args[1:]))
    except ValueError as exc:
        raise ValueError(f"malformed generator string {text!r}: {exc}") from exc
    raise ValueError(f"unknown generator string {text!r}")
