"""Weighted l_p norms of polynomials, unit-ball volumes, and related constants.

The exponent p lives in [1, inf]; ``math.inf`` is the distinguished value
for the weighted naive height. Weights are strictly positive, one per
coefficient. p = inf formulas are the p -> inf limits of the finite-p
expressions (Gamma(1 + 1/p) -> 1, Gamma(1 + (n+1)/p) -> 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numerics import gamma
from .poly import IntPoly, RealPoly

__all__ = [
    "WeightedHeight",
    "parse_p",
    "bombieri_weights",
    "lp_norm",
    "lp_norm_array",
    "ball_volume",
    "limit_constant_c",
]


def parse_p(value) -> float:
    """Normalize a p specification ("inf", inf, or a number >= 1)."""
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "oo"):
            return math.inf
        value = float(value)
    p = float(value)
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"p must satisfy 1 <= p <= inf, got {value!r}")
    return p


def bombieri_weights(n: int) -> np.ndarray:
    """w_i = binom(n, i)^(-1/2); with p=2 this induces the Bombieri 2-norm."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    return np.array([math.comb(n, i) ** -0.5 for i in range(n + 1)])


@dataclass(frozen=True)
class WeightedHeight:
    """Degree n, positive weight vector w_0..w_n, and exponent p."""

    n: int
    weights: tuple[float, ...]
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", parse_p(self.p))
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if self.n < 1:
            raise ValueError("degree must be >= 1")
        if len(w) != self.n + 1:
            raise ValueError(f"need {self.n + 1} weights, got {len(w)}")
        if any(not x > 0 for x in w):
            raise ValueError("weights must be positive")

    @classmethod
    def ones(cls, n: int, p) -> "WeightedHeight":
        return cls(n, (1.0,) * (n + 1), parse_p(p))

    @classmethod
    def bombieri(cls, n: int, p=2.0) -> "WeightedHeight":
        return cls(n, tuple(bombieri_weights(n)), parse_p(p))

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.p)

    @property
    def w(self) -> np.ndarray:
        return np.asarray(self.weights)


def lp_norm(h: WeightedHeight, q: RealPoly | IntPoly | Sequence[float]) -> float:
    """Weighted l_p norm of a degree-n polynomial's coefficient vector."""
    coeffs = np.asarray(q.coeffs if hasattr(q, "coeffs") else q, dtype=float)
    if len(coeffs) != h.n + 1:
        raise ValueError(
            f"degree mismatch: height expects degree {h.n}, got {len(coeffs) - 1}"
        )
    return float(lp_norm_array(h, coeffs.reshape(1, -1))[0])


def lp_norm_array(h: WeightedHeight, coeffs: np.ndarray) -> np.ndarray:
    """Vectorized lp_norm over rows of an (m, n+1) coefficient array."""
    scaled = np.abs(coeffs * h.w)
    if h.is_inf:
        return scaled.max(axis=1)
    return (scaled**h.p).sum(axis=1) ** (1.0 / h.p)


def ball_volume(h: WeightedHeight) -> float:
    """Volume of the unit weighted l_p ball in dimension n+1."""
    wprod = float(np.prod(h.w))
    if h.is_inf:
        return 2.0 ** (h.n + 1) / wprod
    p, d = h.p, h.n + 1
    return 2.0**d * gamma(1.0 + 1.0 / p) ** d / (wprod * gamma(1.0 + d / p))


def limit_constant_c(h: WeightedHeight) -> float:
    """The constant 2 / ((n+1) Vol) scaling the top-stratum correlation density.

    For finite p this equals the Gamma form
    w_0...w_n Gamma((n+1)/p) / (2^n p Gamma(1+1/p)^(n+1)); the volume form is
    p-uniform and is the definition used here.
    """
    return 2.0 / ((h.n + 1) * ball_volume(h))


def limit_constant_c_gamma_form(h: WeightedHeight) -> float:
    """Gamma-function form of the constant; finite p only (cross-check)."""
    if h.is_inf:
        raise ValueError("gamma form is defined for finite p")
    p, n = h.p, h.n
    wprod = float(np.prod(h.w))
    return wprod * gamma((n + 1) / p) / (2.0**n * p * gamma(1.0 + 1.0 / p) ** (n + 1))
