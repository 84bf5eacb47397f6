"""Box-union regions in R^k x C_+^l for counting and integration.

A region is a finite disjoint union of product boxes: k closed real
intervals and l closed axis-aligned rectangles in the upper half-plane
(im_lo >= 0). Closed-box semantics is deliberate: a root landing exactly
on a boundary counts as inside, which keeps endpoint ties deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = ["Box", "Region", "real_line_box", "interval_region", "rect_region"]

_WIDE = 1e9  # stand-in for an unbounded real slot


@dataclass(frozen=True)
class Box:
    """One product box: k real intervals, l rectangles (re_lo, re_hi, im_lo, im_hi)."""

    real_intervals: tuple[tuple[float, float], ...] = ()
    complex_rects: tuple[tuple[float, float, float, float], ...] = ()

    def __post_init__(self) -> None:
        ivs = tuple(
            (float(a), float(b)) for a, b in self.real_intervals
        )
        rects = tuple(
            (float(a), float(b), float(c), float(d)) for a, b, c, d in self.complex_rects
        )
        object.__setattr__(self, "real_intervals", ivs)
        object.__setattr__(self, "complex_rects", rects)
        for a, b in ivs:
            if b < a:
                raise ValueError(f"empty interval ({a}, {b})")
        for a, b, c, d in rects:
            if b < a or d < c:
                raise ValueError(f"empty rectangle {(a, b, c, d)}")
            if c < 0:
                raise ValueError("rectangles must lie in the closed upper half-plane")

    @property
    def k(self) -> int:
        return len(self.real_intervals)

    @property
    def l(self) -> int:
        return len(self.complex_rects)

    def contains(self, xs: Sequence[float], zs: Sequence[complex]) -> bool:
        for (a, b), x in zip(self.real_intervals, xs):
            if not a <= x <= b:
                return False
        for (a, b, c, d), z in zip(self.complex_rects, zs):
            if not (a <= z.real <= b and c <= z.imag <= d):
                return False
        return True

    def _overlaps(self, other: "Box") -> bool:
        for (a, b), (c, d) in zip(self.real_intervals, other.real_intervals):
            if b < c or d < a:
                return False
        for r1, r2 in zip(self.complex_rects, other.complex_rects):
            if r1[1] < r2[0] or r2[1] < r1[0] or r1[3] < r2[2] or r2[3] < r1[2]:
                return False
        return True


@dataclass(frozen=True)
class Region:
    """Disjoint union of boxes, all with the same (k, l) signature."""

    k: int
    l: int
    boxes: tuple[Box, ...]

    def __post_init__(self) -> None:
        if self.k < 0 or self.l < 0 or self.k + 2 * self.l <= 0:
            raise ValueError("need k, l >= 0 with k + 2l > 0")
        boxes = tuple(self.boxes)
        object.__setattr__(self, "boxes", boxes)
        for box in boxes:
            if box.k != self.k or box.l != self.l:
                raise ValueError("box signature does not match region (k, l)")
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if boxes[i]._overlaps(boxes[j]):
                    raise ValueError(f"boxes {i} and {j} overlap; union must be disjoint")

    @property
    def span(self) -> int:
        return self.k + 2 * self.l

    def contains(self, xs: Sequence[float], zs: Sequence[complex]) -> bool:
        return any(box.contains(xs, zs) for box in self.boxes)


def interval_region(intervals: Sequence[tuple[float, float]]) -> Region:
    """k = 1, l = 0 region from a union of real intervals."""
    return Region(1, 0, tuple(Box(real_intervals=(iv,)) for iv in intervals))


def rect_region(rects: Sequence[tuple[float, float, float, float]]) -> Region:
    """k = 0, l = 1 region from a union of upper half-plane rectangles."""
    return Region(0, 1, tuple(Box(complex_rects=(r,)) for r in rects))


def real_line_box(half_width: float = _WIDE) -> Region:
    """k = 1, l = 0 region approximating the whole real line."""
    return interval_region([(-half_width, half_width)])
