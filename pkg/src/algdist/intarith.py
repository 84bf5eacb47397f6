"""Integer-polynomial predicates: content, irreducibility over Q, primality.

A polynomial is prime when it is primitive (content 1), irreducible over
the rationals, and has positive leading coefficient. Irreducibility is
decided by exhaustive search for an integer factor of degree d <= n/2
with coefficients inside the Mignotte bound 2^d * ||q||_2, pruned by
divisibility of the edge coefficients and of the values at z = 1, -1.
Coefficients at desk scale are small, so the search stays tiny for the
supported degrees n <= 6 and is trivially auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .poly import IntPoly

__all__ = [
    "PrimalityVerdict",
    "UnsupportedDegreeError",
    "content",
    "is_irreducible",
    "is_prime_poly",
]

DEGREE_CAP = 6


class UnsupportedDegreeError(ValueError):
    """Degree exceeds the exhaustive-search cap."""


@dataclass(frozen=True)
class PrimalityVerdict:
    primitive: bool
    irreducible: bool
    leading_positive: bool

    @property
    def prime(self) -> bool:
        return self.primitive and self.irreducible and self.leading_positive


def content(q: IntPoly) -> int:
    """gcd of the absolute coefficients."""
    return math.gcd(*(abs(c) for c in q.coeffs))


def _divisors(m: int) -> list[int]:
    m = abs(m)
    out = []
    for d in range(1, int(math.isqrt(m)) + 1):
        if m % d == 0:
            out.append(d)
            if d != m // d:
                out.append(m // d)
    return sorted(out)


def _divides(num: tuple[int, ...], den: tuple[int, ...]) -> bool:
    """Exact polynomial division test over Q (coefficients low to high)."""
    rem = [Fraction(c) for c in num]
    dn = len(den) - 1
    lead = Fraction(den[-1])
    for i in range(len(rem) - 1, dn - 1, -1):
        f = rem[i] / lead
        if f:
            for j in range(dn + 1):
                rem[i - dn + j] -= f * den[j]
    return all(c == 0 for c in rem)


def _factor_candidates(coeffs: tuple[int, ...], d: int):
    """Degree-d integer factor candidates, Mignotte-bounded and edge-pruned.

    The caller guarantees coeffs[0] != 0, so g(0) | q(0) applies; the
    leading coefficient may be taken positive without loss.
    """
    bound = int(2**d * math.sqrt(sum(c * c for c in coeffs))) + 1
    lead_divs = [g for g in _divisors(coeffs[-1]) if g <= bound]
    const_divs = [
        s * g for g in _divisors(coeffs[0]) if g <= bound for s in (1, -1)
    ]
    middle = range(-bound, bound + 1)
    for gd in lead_divs:
        for g0 in const_divs:
            for mid in product(middle, repeat=d - 1):
                yield (g0, *mid, gd)


def is_irreducible(q: IntPoly) -> bool:
    """True iff q has no rational factorization into factors of degree >= 1."""
    n = q.degree
    if n > DEGREE_CAP:
        raise UnsupportedDegreeError(f"degree {n} exceeds cap {DEGREE_CAP}")
    if n == 1:
        return True
    c = q.coeffs
    g = content(q)
    if g > 1:
        c = tuple(x // g for x in c)
    if c[0] == 0:
        return False  # divisible by z
    q1 = sum(c)
    qm1 = sum(x if i % 2 == 0 else -x for i, x in enumerate(c))
    if q1 == 0 or qm1 == 0:
        return False  # root at z = 1 or z = -1
    for d in range(1, n // 2 + 1):
        for cand in _factor_candidates(c, d):
            g1 = sum(cand)
            if g1 != 0 and q1 % g1 != 0:
                continue
            gm1 = sum(x if i % 2 == 0 else -x for i, x in enumerate(cand))
            if gm1 != 0 and qm1 % gm1 != 0:
                continue
            if g1 == 0 or gm1 == 0:
                continue  # candidate has root +-1 but q does not
            if _divides(c, cand):
                return False
    return True


def is_prime_poly(q: IntPoly) -> PrimalityVerdict:
    """Primitivity, irreducibility, and leading-sign verdict for q."""
    return PrimalityVerdict(
        primitive=content(q) == 1,
        irreducible=is_irreducible(q),
        leading_positive=q.coeffs[-1] > 0,
    )
