"""Find and classify all complex zeros of real polynomials.

The solver is a batched Aberth-Ehrlich simultaneous iteration started from
perturbed scaled roots of unity (radius from the Fujiwara coefficient
bound), finished with Newton polish. Everything is deterministic. The
batch entry point drives the counting and simulation pipelines, which
would be far too slow one polynomial at a time.

Classification snaps near-real roots onto the axis (relative tolerance
``real_tol``) and keeps one member of each conjugate pair, so a degree-n
polynomial always satisfies #reals + 2 * #uppers = n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import IntPoly, RealPoly

__all__ = ["ClassifiedRoots", "RootFindingError", "find_roots", "solve_batch", "classify_batch"]

DEFAULT_REAL_TOL = 1e-10
_MAX_ITER = 200
_STEP_TOL = 1e-14


class RootFindingError(RuntimeError):
    """Iteration failed to converge; carries whatever roots were reached."""

    def __init__(self, message: str, partial: np.ndarray | None = None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class ClassifiedRoots:
    """Sorted real roots, upper half-plane roots, and the worst residual |q(root)|."""

    reals: tuple[float, ...]
    uppers: tuple[complex, ...]
    residual: float


def _fujiwara_radius(coeffs: np.ndarray) -> np.ndarray:
    """Root-magnitude bound per polynomial; coeffs is (b, n+1), lead != 0."""
    n = coeffs.shape[1] - 1
    lead = np.abs(coeffs[:, -1])
    best = np.zeros(len(coeffs))
    for i in range(n):
        ratio = np.abs(coeffs[:, i]) / lead
        if i == 0:
            ratio = ratio / 2.0
        np.maximum(best, ratio ** (1.0 / (n - i)), out=best)
    return 2.0 * np.maximum(best, 1e-3)


def _horner_pair(coeffs: np.ndarray, z: np.ndarray):
    """Evaluate q and q' at z; coeffs (b, n+1) real, z (b, n) complex."""
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for i in range(coeffs.shape[1] - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[:, i, None]
    return p, dp


def solve_batch(coeffs: np.ndarray, max_iter: int = _MAX_ITER) -> np.ndarray:
    """All complex roots of each row of an (b, n+1) coefficient array.

    Returns a (b, n) complex array (unclassified, unsorted). Raises
    RootFindingError when some polynomial exceeds the iteration cap.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    b, n1 = coeffs.shape
    n = n1 - 1
    if n < 1:
        raise ValueError("degree must be >= 1")
    if np.any(coeffs[:, -1] == 0.0):
        raise ValueError("leading coefficient must be non-zero")
    if b == 0:
        return np.zeros((0, n), dtype=complex)

    radius = _fujiwara_radius(coeffs)
    angles = 2.0 * np.pi * (np.arange(n) + 0.5) / n + 0.45
    z = radius[:, None] * np.exp(1j * angles)[None, :]

    active = np.ones(b, dtype=bool)
    for _ in range(max_iter):
        za = z[active]
        p, dp = _horner_pair(coeffs[active], za)
        # Newton ratio; nudge exact critical points to keep the step finite.
        dead = dp == 0.0
        if dead.any():
            dp = np.where(dead, 1e-30, dp)
        w = p / dp
        diff = za[:, :, None] - za[:, None, :]
        inv = np.zeros_like(diff)
        mask = ~np.eye(n, dtype=bool)
        inv[:, mask] = 1.0 / diff[:, mask]
        s = inv.sum(axis=2)
        denom = 1.0 - w * s
        small = np.abs(denom) < 1e-30
        if small.any():
            denom = np.where(small, 1e-30, denom)
        step = w / denom
        za = za - step
        z[active] = za
        done = (np.abs(step) <= _STEP_TOL * (1.0 + np.abs(za))).all(axis=1)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            break
    else:
        pass
    if active.any():
        raise RootFindingError(
            f"{int(active.sum())} polynomial(s) did not converge in {max_iter} iterations",
            partial=z,
        )

    # Newton polish on the original polynomial.
    for _ in range(2):
        p, dp = _horner_pair(coeffs, z)
        dp = np.where(dp == 0.0, 1e-30, dp)
        z = z - p / dp
    return z


def _residuals(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    p, _ = _horner_pair(coeffs, z)
    return np.abs(p)


def classify_batch(roots: np.ndarray, real_tol: float = DEFAULT_REAL_TOL):
    """Split a (b, n) root array into real/upper masks.

    Returns (real_mask, upper_mask); lower-half conjugates are neither. A
    poly whose non-real roots fail to pair evenly gets its smallest-|Im|
    root re-snapped until the count invariant holds.
    """
    roots = np.asarray(roots, dtype=complex)
    real_mask = np.abs(roots.imag) <= real_tol * (1.0 + np.abs(roots.real))
    # Non-real roots must pair up; force parity per polynomial if needed.
    bad = (~real_mask).sum(axis=1) % 2 == 1
    while bad.any():
        rows = np.flatnonzero(bad)
        im = np.abs(roots[rows].imag)
        im[real_mask[rows]] = np.inf
        real_mask[rows, im.argmin(axis=1)] = True
        bad = (~real_mask).sum(axis=1) % 2 == 1
    upper_mask = ~real_mask & (roots.imag > 0)
    return real_mask, upper_mask


def find_roots(
    q: RealPoly | IntPoly, real_tol: float = DEFAULT_REAL_TOL
) -> ClassifiedRoots:
    """All zeros of q, classified into reals and upper half-plane points."""
    if isinstance(q, IntPoly):
        q = q.as_real()
    coeffs = np.asarray(q.coeffs, dtype=float).reshape(1, -1)
    n = coeffs.shape[1] - 1
    scale = np.abs(coeffs).max()
    if abs(coeffs[0, -1]) < 1e-300 * scale:
        raise ValueError("leading coefficient is degenerately small")
    roots = solve_batch(coeffs)
    real_mask, upper_mask = classify_batch(roots, real_tol)
    reals = np.sort(roots[0, real_mask[0]].real)
    ups = roots[0, upper_mask[0]]
    ups = ups[np.lexsort((ups.imag, ups.real))]
    if len(reals) + 2 * len(ups) != n:
        raise RootFindingError(
            f"classification lost a conjugate pair: {len(reals)} real, {len(ups)} upper",
            partial=roots,
        )
    pts = np.concatenate([reals.astype(complex), ups, ups.conj()])
    residual = float(_residuals(coeffs, pts.reshape(1, -1)).max())
    return ClassifiedRoots(
        tuple(float(r) for r in reals), tuple(complex(u) for u in ups), residual
    )
