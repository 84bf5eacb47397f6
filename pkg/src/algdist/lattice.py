"""Integer and coprime-integer point counts in dilated regions.

A region is a bounded membership predicate with an axis-aligned bounding
box; counts scan the integer grid in blocks (vectorized membership),
partitioned along the first axis. Coprime counts run both a direct gcd
filter and Moebius inversion over dilations whenever the scan volume is
affordable, and the two must agree exactly; larger problems fall back to
inversion alone. Dilation factors are real-valued because the inversion
evaluates lambda(Q/k * A).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "LatticeRegion",
    "ScanTooLargeError",
    "mobius",
    "count_integer_points",
    "count_coprime_points",
    "coprime_counts_both",
    "cube_region",
    "lp_ball_region",
    "box_region",
]

# Direct-scan affordability threshold: d * (2*Q*N)^d grid visits.
DIRECT_SCAN_LIMIT = 100_000_000
_BLOCK = 1 << 21


class ScanTooLargeError(RuntimeError):
    """Requested scan volume exceeds the resource cap."""


@dataclass(frozen=True)
class LatticeRegion:
    """Membership predicate over (m, dim) arrays plus per-axis half-widths."""

    dim: int
    contains: Callable[[np.ndarray], np.ndarray]
    bounds: tuple[float, ...]

    def __post_init__(self) -> None:
        b = self.bounds
        if np.isscalar(b) or isinstance(b, (int, float)):
            b = (float(b),) * self.dim
        else:
            b = tuple(float(x) for x in b)
        object.__setattr__(self, "bounds", b)
        if len(b) != self.dim:
            raise ValueError("need one bound per axis")
        if any(not x > 0 for x in b):
            raise ValueError("bounds must be positive")

    @property
    def radius(self) -> float:
        return max(self.bounds)


def cube_region(dim: int, half: float = 1.0) -> LatticeRegion:
    return LatticeRegion(
        dim, lambda v: (np.abs(v) <= half).all(axis=1), (half,) * dim
    )


def box_region(intervals: Sequence[tuple[float, float]]) -> LatticeRegion:
    lo = np.array([a for a, _ in intervals])
    hi = np.array([b for _, b in intervals])
    bounds = tuple(max(abs(a), abs(b)) for a, b in intervals)
    return LatticeRegion(
        len(intervals),
        lambda v: ((v >= lo) & (v <= hi)).all(axis=1),
        bounds,
    )


def lp_ball_region(dim: int, p: float) -> LatticeRegion:
    if math.isinf(p):
        return cube_region(dim)
    return LatticeRegion(
        dim, lambda v: (np.abs(v) ** p).sum(axis=1) <= 1.0, (1.0,) * dim
    )


_SPF_CACHE: dict[int, np.ndarray] = {}


def _smallest_prime_factors(limit: int) -> np.ndarray:
    size = max(limit + 1, 4)
    cached = _SPF_CACHE.get(0)
    if cached is not None and len(cached) >= size:
        return cached
    spf = np.arange(size, dtype=np.int64)
    for i in range(2, int(math.isqrt(size - 1)) + 1):
        if spf[i] == i:
            sl = spf[i * i :: i]
            sl[sl == np.arange(i * i, size, i)] = i
    _SPF_CACHE[0] = spf
    return spf


def mobius(k: int) -> int:
    """Moebius function via sieve-backed factorization."""
    if k < 1:
        raise ValueError("mobius requires k >= 1")
    if k == 1:
        return 1
    spf = _smallest_prime_factors(k)
    out = 1
    while k > 1:
        p = int(spf[k])
        k //= p
        if k % p == 0:
            return 0
        out = -out
    return out


def _axis_ranges(region: LatticeRegion, q: float) -> list[np.ndarray]:
    ranges = []
    for b in region.bounds:
        m = math.floor(q * b + 1e-12)
        ranges.append(np.arange(-m, m + 1, dtype=np.int64))
    return ranges


def _scan(region: LatticeRegion, q: float, keep: Callable[[np.ndarray], np.ndarray]):
    """Count integer vectors v with v/q in the region and keep(v) true."""
    if q <= 0:
        raise ValueError("dilation must be positive")
    ranges = _axis_ranges(region, q)
    sizes = [len(r) for r in ranges]
    volume = math.prod(sizes)
    if volume > 4 * DIRECT_SCAN_LIMIT:
        raise ScanTooLargeError(
            f"scan volume {volume} over [{-region.radius},{region.radius}]^{region.dim}"
        )
    if volume == 0:
        return 0
    tail = ranges[1:]
    tail_grid = None
    total = 0
    rows_per_block = max(1, _BLOCK // max(1, math.prod(sizes[1:])))
    x0 = ranges[0]
    for start in range(0, len(x0), rows_per_block):
        head = x0[start : start + rows_per_block]
        if tail:
            if tail_grid is None:
                tg = np.meshgrid(*tail, indexing="ij")
                tail_grid = np.stack([g.ravel() for g in tg], axis=1)
            pts = np.empty(
                (len(head) * len(tail_grid), region.dim), dtype=np.int64
            )
            pts[:, 0] = np.repeat(head, len(tail_grid))
            pts[:, 1:] = np.tile(tail_grid, (len(head), 1))
        else:
            pts = head.reshape(-1, 1)
        mask = region.contains(pts / q)
        if mask.any():
            sel = pts[mask]
            total += int(keep(sel).sum())
    return total


def count_integer_points(region: LatticeRegion, q: float) -> int:
    """lambda(QA): integer vectors v with v/Q in the region."""
    return _scan(region, q, lambda v: np.ones(len(v), dtype=bool))


def _coprime_direct(region: LatticeRegion, q: float) -> int:
    def keep(v: np.ndarray) -> np.ndarray:
        g = np.abs(v[:, 0])
        for j in range(1, v.shape[1]):
            g = np.gcd(g, np.abs(v[:, j]))
        return g == 1

    return _scan(region, q, keep)


def _coprime_mobius(region: LatticeRegion, q: float) -> int:
    kmax = math.floor(q * region.radius) + 1
    origin_inside = int(
        region.contains(np.zeros((1, region.dim)))[0]
    )
    total = 0
    for k in range(1, kmax + 1):
        mu = mobius(k)
        if mu == 0:
            continue
        total += mu * (count_integer_points(region, q / k) - origin_inside)
    return total


def _direct_affordable(region: LatticeRegion, q: float) -> bool:
    side = 2.0 * q * region.radius
    return region.dim * side**region.dim <= DIRECT_SCAN_LIMIT


def coprime_counts_both(region: LatticeRegion, q: float) -> tuple[int, int]:
    """(direct gcd-filter count, Moebius-inversion count)."""
    return _coprime_direct(region, q), _coprime_mobius(region, q)


def count_coprime_points(region: LatticeRegion, q: float) -> int:
    """lambda*(QA): integer vectors with coprime coordinates (origin excluded).

    Runs both routes and cross-checks them when the direct scan is
    affordable; otherwise uses Moebius inversion alone.
    """
    if _direct_affordable(region, q):
        direct, inverted = coprime_counts_both(region, q)
        if direct != inverted:
            raise AssertionError(
                f"coprime count mismatch: direct {direct} vs inversion {inverted}"
            )
        return direct
    return _coprime_mobius(region, q)
