"""Monte Carlo side of the zero-distribution story.

Samples the random polynomial with independent exponential-power
coefficients (uniform on [-1,1] for p = inf), samples coefficient vectors
uniform on the weighted l_p ball, classifies zeros in bulk, and estimates
densities, mixed moments, and real-zero-count distributions with standard
errors.

Draws are processed in fixed-size chunks, each on its own RNG substream,
so results are reproducible bit for bit regardless of how chunks are
scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .heights import WeightedHeight, parse_p
from .numerics import RngStream
from .poly import RealPoly
from .roots import classify_batch, solve_batch

__all__ = [
    "ExpPowerSampler",
    "sample_eta",
    "sample_G",
    "sample_uniform_ball",
    "coefficient_matrix",
    "ball_matrix",
    "real_roots_matrix",
    "empirical_real_density",
    "empirical_mixed_moment",
    "empirical_real_count_dist",
    "ball_vs_G_root_equivalence",
    "EquivalenceReport",
]

_CHUNK = 1 << 16


@dataclass(frozen=True)
class ExpPowerSampler:
    """Sampler for the density proportional to exp(-|t|^p) (uniform at p=inf).

    For finite p, |t|^p is Gamma(1/p)-distributed, so |t| = g^(1/p) with a
    uniform sign; numpy's gamma generator handles shape < 1.
    """

    p: float

    def draw(self, gen: np.random.Generator, size: int) -> np.ndarray:
        if math.isinf(self.p):
            return gen.uniform(-1.0, 1.0, size)
        g = gen.standard_gamma(1.0 / self.p, size)
        signs = gen.integers(0, 2, size) * 2 - 1
        return signs * g ** (1.0 / self.p)


def sample_eta(p: float, rng: RngStream, size: int | None = None):
    """One draw (or `size` draws) from the exponential-power coefficient law."""
    sampler = ExpPowerSampler(parse_p(p))
    gen = rng.generator()
    out = sampler.draw(gen, size if size is not None else 1)
    return out if size is not None else float(out[0])


def coefficient_matrix(
    h: WeightedHeight, gen: np.random.Generator, draws: int
) -> np.ndarray:
    """(draws, n+1) coefficient rows of the random polynomial eta_k / w_k."""
    sampler = ExpPowerSampler(h.p)
    eta = sampler.draw(gen, draws * (h.n + 1)).reshape(draws, h.n + 1)
    coeffs = eta / h.w
    # A zero leading coefficient has probability zero; redraw defensively.
    while True:
        bad = np.flatnonzero(coeffs[:, -1] == 0.0)
        if not len(bad):
            return coeffs
        eta_new = sampler.draw(gen, len(bad) * (h.n + 1)).reshape(-1, h.n + 1)
        coeffs[bad] = eta_new / h.w


def sample_G(h: WeightedHeight, rng: RngStream) -> RealPoly:
    """One draw of the random polynomial as a RealPoly."""
    row = coefficient_matrix(h, rng.generator(), 1)[0]
    return RealPoly(tuple(row))


def ball_matrix(
    h: WeightedHeight, gen: np.random.Generator, draws: int
) -> np.ndarray:
    """(draws, n+1) coefficient rows uniform on the weighted l_p ball.

    p = inf factorizes into independent uniforms per axis; finite p uses
    the exponential-power + extra exponential radial representation.
    """
    d = h.n + 1
    if h.is_inf:
        return gen.uniform(-1.0, 1.0, (draws, d)) / h.w
    sampler = ExpPowerSampler(h.p)
    eta = sampler.draw(gen, draws * d).reshape(draws, d)
    z = gen.standard_exponential(draws)
    radial = ((np.abs(eta) ** h.p).sum(axis=1) + z) ** (1.0 / h.p)
    return eta / h.w / radial[:, None]


def sample_uniform_ball(h: WeightedHeight, rng: RngStream) -> np.ndarray:
    """One coefficient vector uniform on the weighted l_p ball."""
    return ball_matrix(h, rng.generator(), 1)[0]


def _chunks(draws: int):
    start = 0
    idx = 0
    while start < draws:
        yield idx, min(_CHUNK, draws - start)
        start += _CHUNK
        idx += 1


def _draw_roots(h: WeightedHeight, rng: RngStream, count: int, source: str):
    gen = rng.generator()
    if source == "G":
        coeffs = coefficient_matrix(h, gen, count)
    elif source == "ball":
        coeffs = ball_matrix(h, gen, count)
        lead = coeffs[:, -1]
        tiny = np.abs(lead) < 1e-300
        if tiny.any():
            coeffs = coeffs[~tiny]
    else:
        raise ValueError(f"unknown source {source!r}")
    roots = solve_batch(coeffs)
    real_mask, upper_mask = classify_batch(roots)
    return roots, real_mask, upper_mask


def real_roots_matrix(roots: np.ndarray, real_mask: np.ndarray) -> np.ndarray:
    """Real parts where real, NaN elsewhere (keeps per-draw structure)."""
    out = np.where(real_mask, roots.real, np.nan)
    return out


def empirical_real_density(
    h: WeightedHeight,
    bins: Sequence[tuple[float, float]],
    draws: int,
    rng: RngStream,
    source: str = "G",
):
    """Per-bin (estimate, std_error) of the real-zero density.

    estimate for bin I = mean count of real zeros in I per draw, divided by
    |I|; the standard error comes from the across-draw variance.
    """
    bins = [(float(a), float(b)) for a, b in bins]
    nb = len(bins)
    sums = np.zeros(nb)
    sums2 = np.zeros(nb)
    total = 0
    for idx, count in _chunks(draws):
        roots, real_mask, _ = _draw_roots(h, rng.shifted(idx), count, source)
        xs = real_roots_matrix(roots, real_mask)
        for j, (a, b) in enumerate(bins):
            c = ((xs >= a) & (xs <= b)).sum(axis=1).astype(float)
            sums[j] += c.sum()
            sums2[j] += (c * c).sum()
        total += len(roots)
    lengths = np.array([b - a for a, b in bins])
    mean = sums / total
    var = np.maximum(sums2 / total - mean**2, 0.0)
    est = mean / lengths
    se = np.sqrt(var / total) / lengths
    return est, se


def empirical_mixed_moment(
    h: WeightedHeight,
    real_intervals: Sequence[tuple[float, float]],
    rects: Sequence[tuple[float, float, float, float]],
    draws: int,
    rng: RngStream,
    source: str = "G",
):
    """Monte Carlo (estimate, std_error) of E[prod_i mu(B_i)].

    The first k factors count real zeros in disjoint intervals, the rest
    count upper half-plane zeros in disjoint rectangles.
    """
    s = s2 = 0.0
    total = 0
    for idx, count in _chunks(draws):
        roots, real_mask, upper_mask = _draw_roots(h, rng.shifted(idx), count, source)
        prod = np.ones(len(roots))
        xs = np.where(real_mask, roots.real, np.nan)
        for a, b in real_intervals:
            prod *= ((xs >= a) & (xs <= b)).sum(axis=1)
        for a, b, c, d in rects:
            inside = (
                upper_mask
                & (roots.real >= a)
                & (roots.real <= b)
                & (roots.imag >= c)
                & (roots.imag <= d)
            )
            prod *= inside.sum(axis=1)
        s += prod.sum()
        s2 += (prod * prod).sum()
        total += len(roots)
    mean = s / total
    var = max(s2 / total - mean * mean, 0.0)
    return mean, math.sqrt(var / total)


def empirical_real_count_dist(
    h: WeightedHeight, draws: int, rng: RngStream, source: str = "G"
):
    """Frequencies of each real-zero count with binomial standard errors.

    Returns (counts 0..n, frequencies, std_errors); entries with the wrong
    parity are structurally zero.
    """
    n = h.n
    tallies = np.zeros(n + 1)
    total = 0
    for idx, count in _chunks(draws):
        _, real_mask, _ = _draw_roots(h, rng.shifted(idx), count, source)
        nreal = real_mask.sum(axis=1)
        tallies += np.bincount(nreal, minlength=n + 1)[: n + 1]
        total += len(real_mask)
    freq = tallies / total
    se = np.sqrt(freq * (1.0 - freq) / total)
    return np.arange(n + 1), freq, se


@dataclass(frozen=True)
class EquivalenceReport:
    """Two-sample comparison of root laws from the two coefficient ensembles."""

    bin_edges: tuple[float, ...]
    z_density: tuple[float, ...]
    z_counts: tuple[float, ...]
    max_abs_z: float
    n_above_3: int

    @property
    def passed(self) -> bool:
        # 3 sigma per comparison, with one 4 sigma outlier allowed per 20 bins.
        allowance = 1 + len(self.z_density) // 20
        return self.max_abs_z < 4.0 and self.n_above_3 <= allowance


def ball_vs_G_root_equivalence(
    h: WeightedHeight,
    draws: int,
    rng: RngStream,
    bin_range: tuple[float, float] = (-2.5, 2.5),
    n_bins: int = 20,
) -> EquivalenceReport:
    """Statistical check that ball-uniform and product-law roots agree.

    Compares binned real-zero densities and the real-zero-count
    distribution between the two ensembles; reports per-bin z-scores.
    """
    edges = np.linspace(bin_range[0], bin_range[1], n_bins + 1)
    bins = list(zip(edges[:-1], edges[1:]))
    est_g, se_g = empirical_real_density(h, bins, draws, rng, source="G")
    est_b, se_b = empirical_real_density(h, bins, draws, rng.shifted(10_000), source="ball")
    z_density = (est_g - est_b) / np.sqrt(se_g**2 + se_b**2 + 1e-300)

    _, fg, sg = empirical_real_count_dist(h, draws, rng.shifted(20_000), source="G")
    _, fb, sb = empirical_real_count_dist(h, draws, rng.shifted(30_000), source="ball")
    live = (fg > 0) | (fb > 0)
    z_counts = np.zeros(h.n + 1)
    z_counts[live] = (fg[live] - fb[live]) / np.sqrt(
        sg[live] ** 2 + sb[live] ** 2 + 1e-300
    )

    allz = np.concatenate([z_density, z_counts[live]])
    return EquivalenceReport(
        bin_edges=tuple(edges),
        z_density=tuple(float(z) for z in z_density),
        z_counts=tuple(float(z) for z in z_counts),
        max_abs_z=float(np.abs(allz).max()),
        n_above_3=int((np.abs(allz) > 3.0).sum()),
    )
