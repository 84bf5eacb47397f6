"""Polynomial types and root-side algebra.

Coefficient order is index = power throughout: ``coeffs[0]`` is the
constant term. Point sets handed to the symmetric-function routines must
be closed under complex conjugation; conjugate pairs are multiplied as
real quadratic factors so the expanded coefficients stay exactly real.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "IntPoly",
    "RealPoly",
    "RootConfiguration",
    "ConjugateClosureError",
    "elem_sym",
    "vandermonde_abs",
    "discriminant_from_roots",
    "expand_monic",
    "evaluate",
    "derivative",
]

CONJUGATE_TOL = 1e-9


class ConjugateClosureError(ValueError):
    """Point multiset is not closed under complex conjugation."""


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial a_0 + a_1 z + ... + a_n z^n with a_n != 0, n >= 1."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("IntPoly needs degree >= 1")
        if self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be non-zero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def as_real(self) -> "RealPoly":
        return RealPoly(tuple(float(c) for c in self.coeffs))


@dataclass(frozen=True)
class RealPoly:
    """Real polynomial with non-zero leading coefficient."""

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("empty coefficient sequence")
        if self.coeffs[-1] == 0.0:
            raise ValueError("leading coefficient must be non-zero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class RootConfiguration:
    """k real points and l points in the open upper half-plane."""

    reals: tuple[float, ...] = ()
    uppers: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "reals", tuple(float(x) for x in self.reals))
        object.__setattr__(self, "uppers", tuple(complex(z) for z in self.uppers))
        for z in self.uppers:
            if not z.imag > 0:
                raise ValueError(f"upper half-plane point has Im <= 0: {z}")

    @property
    def k(self) -> int:
        return len(self.reals)

    @property
    def l(self) -> int:
        return len(self.uppers)

    @property
    def span(self) -> int:
        """Degree consumed by the configuration: k + 2l."""
        return self.k + 2 * self.l

    def all_points(self) -> np.ndarray:
        """Reals, then each upper point followed by its conjugate."""
        pts = list(self.reals)
        for z in self.uppers:
            pts.extend([z, z.conjugate()])
        return np.asarray(pts, dtype=complex)

    def is_degenerate(self) -> bool:
        """True when two points coincide (or an upper point hits the axis)."""
        pts = self.all_points()
        if len(pts) < 2:
            return False
        diff = pts[:, None] - pts[None, :]
        off = np.abs(diff[np.triu_indices(len(pts), k=1)])
        return bool(np.any(off == 0.0))


def _split_conjugate_factors(points: Sequence[complex]):
    """Partition points into real values and conjugate pairs (upper member).

    Raises ConjugateClosureError when some strictly complex point has no
    conjugate partner within the closure tolerance.
    """
    reals: list[float] = []
    complexes: list[complex] = []
    for p in np.asarray(points, dtype=complex):
        if abs(p.imag) <= CONJUGATE_TOL * (1.0 + abs(p)):
            reals.append(p.real)
        else:
            complexes.append(complex(p))
    pairs: list[complex] = []
    pool = complexes[:]
    while pool:
        z = pool.pop(0)
        best, best_d = None, None
        for i, w in enumerate(pool):
            d = abs(w - z.conjugate())
            if best_d is None or d < best_d:
                best, best_d = i, d
        if best is None or best_d > CONJUGATE_TOL * (1.0 + abs(z)):
            raise ConjugateClosureError(
                f"point {z} has no conjugate partner in the multiset"
            )
        w = pool.pop(best)
        re = 0.5 * (z.real + w.real)
        im = 0.5 * abs(z.imag - w.imag)
        pairs.append(complex(re, im))
    return reals, pairs


def _monic_coeffs_from_factors(reals: Sequence[float], pairs: Sequence[complex]) -> np.ndarray:
    """Coefficients of prod (z - r) * prod (z^2 - 2 Re z + |z|^2), low to high."""
    c = np.array([1.0])
    for r in reals:
        c = np.convolve(c, np.array([-float(r), 1.0]))
    for z in pairs:
        c = np.convolve(c, np.array([abs(z) ** 2, -2.0 * z.real, 1.0]))
    return c


def elem_sym(points: Sequence[complex]) -> np.ndarray:
    """Elementary symmetric polynomials sigma_0..sigma_m of a conjugate-closed set."""
    pts = np.asarray(points, dtype=complex)
    if pts.size < 1:
        raise ValueError("need at least one point")
    reals, pairs = _split_conjugate_factors(pts)
    c = _monic_coeffs_from_factors(reals, pairs)
    m = len(c) - 1
    # prod (z - p) = sum_i (-1)^(m-i) sigma_(m-i) z^i  =>  sigma_j = (-1)^j c_(m-j)
    j = np.arange(m + 1)
    return (-1.0) ** j * c[m - j]


def vandermonde_abs(points: Sequence[complex]) -> float:
    """prod over i<j of |z_i - z_j|; 1 for a single point."""
    pts = np.asarray(points, dtype=complex)
    if pts.size < 1:
        raise ValueError("need at least one point")
    if pts.size == 1:
        return 1.0
    i, j = np.triu_indices(pts.size, k=1)
    return float(np.prod(np.abs(pts[i] - pts[j])))


def discriminant_from_roots(points: Sequence[complex]) -> float:
    """prod over i<j of (z_i - z_j)^2 for a conjugate-closed multiset (real)."""
    pts = np.asarray(points, dtype=complex)
    if pts.size < 1:
        raise ValueError("need at least one point")
    _split_conjugate_factors(pts)  # closure check
    if pts.size == 1:
        return 1.0
    i, j = np.triu_indices(pts.size, k=1)
    prod = complex(np.prod((pts[i] - pts[j]) ** 2))
    if abs(prod.imag) > CONJUGATE_TOL * (1.0 + abs(prod)):
        raise ConjugateClosureError(
            f"discriminant has imaginary residue {prod.imag}"
        )
    return prod.real


def expand_monic(config: RootConfiguration) -> RealPoly:
    """Monic real polynomial whose zeros are the configuration points."""
    c = _monic_coeffs_from_factors(config.reals, config.uppers)
    return RealPoly(tuple(c))


def evaluate(q: RealPoly | IntPoly, z: complex) -> complex:
    """Horner evaluation."""
    acc = 0.0 + 0.0j
    for c in reversed(q.coeffs):
        acc = acc * z + c
    return acc


def derivative(q: RealPoly) -> RealPoly:
    """Formal derivative; input must have degree >= 1."""
    if q.degree < 1:
        raise ValueError("derivative requires degree >= 1")
    c = np.asarray(q.coeffs)
    return RealPoly(tuple(c[1:] * np.arange(1, len(c))))
