"""Addressing and geometry of the periodic honeycomb lattice.

Every vertex of the walk's Hilbert space is labelled by a coin direction
``j``, a sublattice bit ``s`` (0 = lattice site, 1 = basis site) and a cell
``(n1, n2)`` on an ``m x m`` torus.  The flat layout is ``j`` outermost, then
``s``, then ``n1``, then ``n2``, so a state vector reshapes to ``(3, 2, m, m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DIRECTIONS",
    "LatticeError",
    "LatticeConfig",
    "VertexAddress",
    "KPoint",
    "flat_index",
    "unflatten",
    "shift_target",
    "shift_permutation",
    "k_points",
    "site_position",
]

# (alpha_j, beta_j) for coin directions j = 0, 1, 2
DIRECTIONS = ((0, 0), (1, 0), (0, 1))


class LatticeError(ValueError):
    """Invalid lattice size, address or index."""


@dataclass(frozen=True)
class LatticeConfig:
    m: int
    N: int = field(init=False)

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, (int, np.integer)):
            raise LatticeError(f"m must be an integer, got {self.m!r}")
        if self.m < 2:
            raise LatticeError("m must be ≥ 2")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "N", 2 * self.m * self.m)

    @property
    def dim(self) -> int:
        """Dimension 3N of the coin-position space."""
        return 3 * self.N

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (3, 2, self.m, self.m)

    def check_cell(self, n1: int, n2: int) -> None:
        if not (0 <= n1 < self.m and 0 <= n2 < self.m):
            raise LatticeError(
                f"cell ({n1}, {n2}) out of range for m={self.m}; "
                f"coordinates must lie in [0, {self.m - 1}]"
            )


@dataclass(frozen=True)
class VertexAddress:
    j: int
    s: int
    n1: int
    n2: int

    def validate(self, cfg: LatticeConfig) -> None:
        if self.j not in (0, 1, 2):
            raise LatticeError(f"coin direction j={self.j} not in {{0, 1, 2}}")
        if self.s not in (0, 1):
            raise LatticeError(f"sublattice bit s={self.s} not in {{0, 1}}")
        cfg.check_cell(self.n1, self.n2)


@dataclass(frozen=True)
class KPoint:
    """A reciprocal-lattice point ``(k1, k2)`` of an ``m x m`` torus."""

    k1: int
    k2: int
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise LatticeError("m must be ≥ 2")
        if not (0 <= self.k1 < self.m and 0 <= self.k2 < self.m):
            raise LatticeError(f"k-point ({self.k1}, {self.k2}) out of range for m={self.m}")

    @property
    def ktilde1(self) -> float:
        return 2.0 * math.pi * self.k1 / self.m

    @property
    def ktilde2(self) -> float:
        return 2.0 * math.pi * self.k2 / self.m

    @property
    def is_origin(self) -> bool:
        return self.k1 == 0 and self.k2 == 0

    def omega_power(self, p: int) -> complex:
        """``exp(2*pi*i*p/m)`` evaluated from the reduced exponent, no drift."""
        r = p % self.m
        return complex(np.exp(2j * math.pi * r / self.m))


def flat_index(addr: VertexAddress, cfg: LatticeConfig) -> int:
    addr.validate(cfg)
    m = cfg.m
    return addr.j * 2 * m * m + addr.s * m * m + addr.n1 * m + addr.n2


def unflatten(idx: int, cfg: LatticeConfig) -> VertexAddress:
    m = cfg.m
    if not (0 <= idx < 6 * m * m):
        raise LatticeError(f"index {idx} out of range [0, {6 * m * m - 1}]")
    j, rest = divmod(idx, 2 * m * m)
    s, rest = divmod(rest, m * m)
    n1, n2 = divmod(rest, m)
    return VertexAddress(j, s, n1, n2)


def shift_target(addr: VertexAddress, cfg: LatticeConfig) -> VertexAddress:
    """Where one application of the shift operator sends ``addr``.

    A hop keeps ``j``, flips ``s`` and moves the cell by ``-(-1)**s`` times the
    direction vector of ``j``.
    """
    addr.validate(cfg)
    a, b = DIRECTIONS[addr.j]
    sign = 1 if addr.s == 0 else -1
    m = cfg.m
    return VertexAddress(
        addr.j, addr.s ^ 1, (addr.n1 - sign * a) % m, (addr.n2 - sign * b) % m
    )


def shift_permutation(cfg: LatticeConfig) -> np.ndarray:
    """Array ``p`` with ``p[i] = flat_index(shift_target(unflatten(i)))``."""
    m = cfg.m
    j, s, n1, n2 = np.indices(cfg.shape).reshape(4, -1)
    alpha = np.array([d[0] for d in DIRECTIONS])[j]
    beta = np.array([d[1] for d in DIRECTIONS])[j]
    sign = 1 - 2 * s
    t1 = (n1 - sign * alpha) % m
    t2 = (n2 - sign * beta) % m
    return j * 2 * m * m + (s ^ 1) * m * m + t1 * m + t2


def k_points(cfg: LatticeConfig) -> list[KPoint]:
    return [KPoint(k1, k2, cfg.m) for k1 in range(cfg.m) for k2 in range(cfg.m)]


def site_position(s: int, n1: int, n2: int) -> tuple[float, float]:
    """Cartesian position of a vertex, unit nearest-neighbour distance.

    Only for exporting pictures of the lattice; the dynamics never use it.
    ``a1`` and ``a2`` have length sqrt(3) at 60 degrees and the basis site
    sits at ``(a1 + a2) / 3`` from its lattice site.
    """
    a1 = np.array([math.sqrt(3.0), 0.0])
    a2 = np.array([math.sqrt(3.0) / 2.0, 1.5])
    r = n1 * a1 + n2 * a2
    if s:
        r = r + (a1 + a2) / 3.0
    return float(r[0]), float(r[1])
