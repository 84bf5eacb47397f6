"""Limiting correlation densities of real/complex zero configurations.

For a configuration of k real points and l upper half-plane points with
k + 2l <= n, the mixed correlation density is an absolute-Vandermonde
prefactor times an (n - k - 2l + 1)-dimensional integral whose integrand
is the product of the coefficient densities evaluated at the coefficients
of q(z) * T(z) (q monic with the configuration as zeros, T the polynomial
with the integration variables as coefficients) and of |T| weights over
the configuration points. On the top stratum k + 2l = n the integral
collapses to a closed form: 2^l * c * sqrt(|D[q]|) / lp_norm(q)^(n+1).

Evaluation modes follow dimension: deterministic adaptive subdivision up
to 3 integration variables, scrambled-Sobol quasi-random above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .regions import Region
from .heights import WeightedHeight, limit_constant_c, lp_norm
from .numerics import (
    DEFAULT_ABS_TOL,
    IntegrationResult,
    RngStream,
    gamma,
    integrate_unit_cube,
    zeta,
)
from .poly import (
    RootConfiguration,
    discriminant_from_roots,
    expand_monic,
    vandermonde_abs,
)

__all__ = [
    "CoefficientDensity",
    "DensityQuery",
    "rho_closed_top",
    "rho_general",
    "rho_real_density",
    "rho_complex_density",
    "prob_real_count",
    "rho_region_integral",
    "limit_integral",
]

_ADAPTIVE_MAX_DIM = 3
_DEFAULT_QMC_BUDGET = 500_000
_DEFAULT_ADAPTIVE_BUDGET = 200_000


@dataclass(frozen=True)
class CoefficientDensity:
    """Per-index coefficient densities f_i induced by a weighted height.

    f_i(t) = w_i / (2 Gamma(1+1/p)) * exp(-|w_i t|^p) for finite p, and
    w_i / 2 on |w_i t| <= 1 for p = inf. Each f_i integrates to one.
    """

    h: WeightedHeight

    def per_index(self, i: int, t: np.ndarray) -> np.ndarray:
        h = self.h
        w = h.weights[i]
        t = np.asarray(t, dtype=float)
        if h.is_inf:
            return np.where(np.abs(w * t) <= 1.0, w / 2.0, 0.0)
        return w / (2.0 * gamma(1.0 + 1.0 / h.p)) * np.exp(-np.abs(w * t) ** h.p)

    def product(self, coeffs: np.ndarray) -> np.ndarray:
        """prod_i f_i(coeffs[:, i]) for an (m, n+1) array."""
        h = self.h
        scaled = np.abs(coeffs * h.w)
        if h.is_inf:
            wprod = float(np.prod(h.w)) / 2.0 ** (h.n + 1)
            return np.where((scaled <= 1.0).all(axis=1), wprod, 0.0)
        norm = float(np.prod(h.w)) / (
            2.0 * gamma(1.0 + 1.0 / h.p)
        ) ** (h.n + 1)
        return norm * np.exp(-(scaled**h.p).sum(axis=1))


@dataclass(frozen=True)
class DensityQuery:
    """A height plus a zero configuration with 0 < k + 2l <= n."""

    h: WeightedHeight
    config: RootConfiguration

    def __post_init__(self) -> None:
        span = self.config.span
        if not 0 < span <= self.h.n:
            raise ValueError(
                f"configuration spans {span}, needs 0 < k+2l <= {self.h.n}"
            )

    @property
    def k(self) -> int:
        return self.config.k

    @property
    def l(self) -> int:
        return self.config.l


def rho_closed_top(query: DensityQuery) -> float:
    """Top-stratum density (k + 2l = n) in closed form.

    Coincident configuration points make the discriminant vanish, so the
    value is 0 there rather than an error.
    """
    h, config = query.h, query.config
    if config.span != h.n:
        raise ValueError("closed form requires k + 2l = n")
    if config.is_degenerate():
        return 0.0
    pts = config.all_points()
    disc = discriminant_from_roots(pts)
    q = expand_monic(config)
    return (
        2.0**query.l
        * limit_constant_c(h)
        * math.sqrt(abs(disc))
        / lp_norm(h, q) ** (h.n + 1)
    )


def _tan_map(u: np.ndarray, scale: float = 1.0):
    """(0,1) -> R with Jacobian column."""
    t = scale * np.tan(np.pi * (u - 0.5))
    jac = np.pi * scale * (1.0 + (t / scale) ** 2)
    return t, jac


def _half_tan_map(u: np.ndarray, scale: float = 1.0):
    """(0,1) -> (0, inf) with Jacobian column."""
    t = scale * np.tan(0.5 * np.pi * u)
    jac = 0.5 * np.pi * scale * (1.0 + (t / scale) ** 2)
    return t, jac


def _t_scales(h: WeightedHeight, qc: np.ndarray) -> np.ndarray:
    """Per-axis decay hints for the t-integral given monic q coefficients."""
    n, m = h.n, len(qc) - 1
    dt = n - m + 1
    scales = np.empty(dt)
    w = h.w
    for j in range(dt):
        i = np.arange(j, j + m + 1)
        denom = np.max(w[i] * np.abs(qc[i - j]))
        scales[j] = min(max(1.0 / denom, 1e-3), 1e3)
    return scales


def _conv_matrix(qc: np.ndarray, n: int) -> np.ndarray:
    """Matrix M with (t @ M.T)_i = coefficient i of q(z) * T(z)."""
    m = len(qc) - 1
    dt = n - m + 1
    out = np.zeros((n + 1, dt))
    for j in range(dt):
        out[j : j + m + 1, j] = qc
    return out


def _t_weight(t: np.ndarray, points: np.ndarray, squared: bool) -> np.ndarray:
    """|T(point)| (or squared) per row; points one value per row batch."""
    acc = np.zeros(len(t), dtype=complex)
    for j in range(t.shape[1] - 1, -1, -1):
        acc = acc * points + t[:, j]
    a = np.abs(acc)
    return a * a if squared else a


def rho_general(
    query: DensityQuery,
    mode: str | None = None,
    budget: int | None = None,
    rng: RngStream | None = None,
    tol: float = DEFAULT_ABS_TOL,
) -> IntegrationResult:
    """Mixed correlation density by numerical integration (any stratum)."""
    h, config = query.h, query.config
    if config.is_degenerate():
        return IntegrationResult(0.0, 0.0, 1)
    n, m = h.n, config.span
    dt = n - m + 1
    dens = CoefficientDensity(h)
    qc = np.asarray(expand_monic(config).coeffs)
    conv_t = _conv_matrix(qc, n).T
    pref = 2.0**query.l * vandermonde_abs(config.all_points())
    xs = np.asarray(config.reals)
    zs = np.asarray(config.uppers, dtype=complex)
    scales = _t_scales(h, qc)

    def g(u: np.ndarray) -> np.ndarray:
        t = np.empty_like(u)
        jac = np.ones(len(u))
        for j in range(dt):
            t[:, j], col = _tan_map(u[:, j], scales[j])
            jac *= col
        vals = dens.product(t @ conv_t)
        live = vals > 0.0
        if not live.any():
            return np.zeros(len(u))
        tl = t[live]
        for x in xs:
            vals[live] *= _t_weight(tl, x, squared=False)
        for z in zs:
            vals[live] *= _t_weight(tl, z, squared=True)
        return vals * jac

    if mode is None:
        mode = "adaptive" if dt <= _ADAPTIVE_MAX_DIM else "quasi-random"
    if budget is None:
        budget = (
            _DEFAULT_ADAPTIVE_BUDGET if mode == "adaptive" else _DEFAULT_QMC_BUDGET
        )
    res = integrate_unit_cube(g, dt, mode=mode, budget=budget, rng=rng, tol=tol)
    return IntegrationResult(
        pref * res.value, pref * res.error_estimate, res.evaluations
    )


def rho_real_density(
    h: WeightedHeight,
    x: float,
    mode: str | None = None,
    budget: int | None = None,
    rng: RngStream | None = None,
    tol: float = DEFAULT_ABS_TOL,
) -> IntegrationResult:
    """Density of real zeros at x, via the reduced n-dimensional form.

    The integrand couples neighbouring variables only: the i-th coefficient
    argument is t_(i-1) - x * t_i with t_(-1) = t_n = 0.
    """
    x = float(x)
    dens = CoefficientDensity(h)
    n = h.n
    wmax = np.max(h.w)
    scale = min(max(1.0 / wmax, 1e-3), 1e3)

    def g(u: np.ndarray) -> np.ndarray:
        t, jacs = _tan_map(u, scale)
        jac = jacs.prod(axis=1)
        coeffs = np.empty((len(u), n + 1))
        coeffs[:, 0] = -x * t[:, 0]
        for i in range(1, n):
            coeffs[:, i] = t[:, i - 1] - x * t[:, i]
        coeffs[:, n] = t[:, n - 1]
        vals = dens.product(coeffs)
        live = vals > 0.0
        if live.any():
            vals[live] *= _t_weight(t[live], x, squared=False)
        return vals * jac

    if mode is None:
        mode = "adaptive" if n <= _ADAPTIVE_MAX_DIM else "quasi-random"
    if budget is None:
        budget = (
            _DEFAULT_ADAPTIVE_BUDGET if mode == "adaptive" else _DEFAULT_QMC_BUDGET
        )
    return integrate_unit_cube(g, n, mode=mode, budget=budget, rng=rng, tol=tol)


def rho_complex_density(
    h: WeightedHeight,
    z: complex,
    mode: str | None = None,
    budget: int | None = None,
    rng: RngStream | None = None,
    tol: float = DEFAULT_ABS_TOL,
) -> IntegrationResult:
    """Density of upper half-plane zeros at z, via the reduced form.

    Carries the explicit 4 |Im z| prefactor; coefficient argument i is
    t_(i-2) - 2 Re(z) t_(i-1) + |z|^2 t_i with out-of-range t's zero.
    """
    z = complex(z)
    n = h.n
    if n < 2:
        raise ValueError("complex zero density requires degree >= 2")
    if z.imag <= 0:
        return IntegrationResult(0.0, 0.0, 1)
    dens = CoefficientDensity(h)
    dt = n - 1
    a, b = -2.0 * z.real, abs(z) ** 2
    wmax = np.max(h.w)
    scale = min(max(1.0 / (wmax * max(1.0, b)), 1e-3), 1e3)

    def g(u: np.ndarray) -> np.ndarray:
        t, jacs = _tan_map(u, scale)
        jac = jacs.prod(axis=1)
        coeffs = np.zeros((len(u), n + 1))
        for i in range(n + 1):
            if i <= n - 2:
                coeffs[:, i] += b * t[:, i]
            if 1 <= i <= n - 1:
                coeffs[:, i] += a * t[:, i - 1]
            if i >= 2:
                coeffs[:, i] += t[:, i - 2]
        vals = dens.product(coeffs)
        live = vals > 0.0
        if live.any():
            vals[live] *= _t_weight(t[live], z, squared=True)
        return vals * jac

    if mode is None:
        mode = "adaptive" if dt <= _ADAPTIVE_MAX_DIM else "quasi-random"
    if budget is None:
        budget = (
            _DEFAULT_ADAPTIVE_BUDGET if mode == "adaptive" else _DEFAULT_QMC_BUDGET
        )
    res = integrate_unit_cube(g, dt, mode=mode, budget=budget, rng=rng, tol=tol)
    pref = 4.0 * abs(z.imag)
    return IntegrationResult(
        pref * res.value, pref * res.error_estimate, res.evaluations
    )


def _row_monic_coeffs(xs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Row-wise monic coefficients of prod(z - x_i) prod(z - z_i)(z - conj z_i).

    xs is (m, k) real, zs is (m, l) complex; result is (m, k + 2l + 1).
    """
    rows = len(xs) if xs.size else len(zs)
    c = np.ones((rows, 1))
    for j in range(xs.shape[1] if xs.ndim == 2 else 0):
        x = xs[:, j]
        new = np.zeros((rows, c.shape[1] + 1))
        new[:, 1:] += c
        new[:, :-1] -= x[:, None] * c
        c = new
    for j in range(zs.shape[1] if zs.ndim == 2 else 0):
        z = zs[:, j]
        a1 = -2.0 * z.real
        a0 = np.abs(z) ** 2
        new = np.zeros((rows, c.shape[1] + 2))
        new[:, 2:] += c
        new[:, 1:-1] += a1[:, None] * c
        new[:, :-2] += a0[:, None] * c
        c = new
    return c


def _row_vandermonde_abs(points: np.ndarray) -> np.ndarray:
    """|Vandermonde| per row of an (m, npts) complex array."""
    m = points.shape[1]
    out = np.ones(len(points))
    for i in range(m):
        for j in range(i + 1, m):
            out *= np.abs(points[:, i] - points[:, j])
    return out


def _row_all_points(xs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    cols = [xs[:, j].astype(complex) for j in range(xs.shape[1])]
    for j in range(zs.shape[1]):
        cols.append(zs[:, j])
        cols.append(zs[:, j].conj())
    return np.stack(cols, axis=1)


def prob_real_count(
    h: WeightedHeight,
    l: int,
    budget: int | None = None,
    rng: RngStream | None = None,
) -> IntegrationResult:
    """Probability that the random degree-n polynomial has exactly n - 2l real zeros.

    Quasi-random integral over all n+1 real dimensions at once: n - 2l real
    slots, (Re, Im) pairs for l upper half-plane slots (the Im axes mapped
    onto (0, inf)), plus the radial variable of the all-zeros density.
    """
    n = h.n
    if not 0 <= 2 * l <= n:
        raise ValueError(f"need 0 <= 2l <= n, got l={l}, n={n}")
    k = n - 2 * l
    dens = CoefficientDensity(h)
    dim = n + 1
    pref = 2.0**l / (math.factorial(l) * math.factorial(k))
    if budget is None:
        budget = _DEFAULT_QMC_BUDGET
    if rng is None:
        rng = RngStream(0)

    def g(u: np.ndarray) -> np.ndarray:
        rows = len(u)
        jac = np.ones(rows)
        xs = np.empty((rows, k))
        for j in range(k):
            xs[:, j], col = _tan_map(u[:, j])
            jac *= col
        zs = np.empty((rows, l), dtype=complex)
        for j in range(l):
            re, col_re = _tan_map(u[:, k + 2 * j])
            im, col_im = _half_tan_map(u[:, k + 2 * j + 1])
            zs[:, j] = re + 1j * im
            jac *= col_re * col_im
        t, col_t = _tan_map(u[:, dim - 1])
        jac *= col_t
        qc = _row_monic_coeffs(xs, zs)
        vals = dens.product(qc * t[:, None])
        live = vals > 0.0
        if live.any():
            vals[live] *= _row_vandermonde_abs(_row_all_points(xs[live], zs[live]))
            vals[live] *= np.abs(t[live]) ** n
        return vals * jac

    res = integrate_unit_cube(g, dim, mode="quasi-random", budget=budget, rng=rng)
    return IntegrationResult(
        pref * res.value, pref * res.error_estimate, res.evaluations
    )


def _closed_top_rows(h: WeightedHeight, xs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Vectorized top-stratum closed form over configuration rows."""
    qc = _row_monic_coeffs(xs, zs)
    vand = _row_vandermonde_abs(_row_all_points(xs, zs))
    scaled = np.abs(qc * h.w)
    if h.is_inf:
        norm = scaled.max(axis=1)
    else:
        norm = (scaled**h.p).sum(axis=1) ** (1.0 / h.p)
    c = limit_constant_c(h)
    l = zs.shape[1]
    return 2.0**l * c * vand / norm ** (h.n + 1)


def rho_region_integral(
    h: WeightedHeight,
    region: Region,
    budget: int | None = None,
    rng: RngStream | None = None,
    tol: float = DEFAULT_ABS_TOL,
) -> IntegrationResult:
    """Integral of the (k, l) correlation density over a box-union region.

    Top stratum (k + 2l = n) integrates the closed form over the
    configuration coordinates (adaptive in low dimension). Lower strata
    flatten configuration and t coordinates into one quasi-random integral.
    """
    k, l = region.k, region.l
    n = h.n
    m = k + 2 * l
    dt = n - m + 1
    dens = CoefficientDensity(h)
    if rng is None:
        rng = RngStream(0)

    total_v = total_e = 0.0
    total_n = 0
    for bi, box in enumerate(region.boxes):
        spans = []
        for lo, hi in box.real_intervals:
            spans.append((lo, hi - lo))
        for re_lo, re_hi, im_lo, im_hi in box.complex_rects:
            spans.append((re_lo, re_hi - re_lo))
            spans.append((im_lo, im_hi - im_lo))
        spans = np.asarray(spans, dtype=float)
        box_vol = float(np.prod(spans[:, 1])) if len(spans) else 1.0
        if box_vol == 0.0:
            continue

        if m == n:
            def g_top(u: np.ndarray, spans=spans) -> np.ndarray:
                cfg = spans[:, 0] + u * spans[:, 1]
                xs = cfg[:, :k]
                zs = cfg[:, k::2] + 1j * cfg[:, k + 1 :: 2]
                return _closed_top_rows(h, xs, zs) * box_vol

            dim = m
            mode = "adaptive" if dim <= _ADAPTIVE_MAX_DIM else "quasi-random"
            if budget is None:
                bud = (
                    _DEFAULT_ADAPTIVE_BUDGET
                    if mode == "adaptive"
                    else _DEFAULT_QMC_BUDGET
                )
            else:
                bud = budget
            res = integrate_unit_cube(
                g_top, dim, mode=mode, budget=bud, rng=rng.shifted(bi), tol=tol
            )
        else:
            def g_flat(u: np.ndarray, spans=spans) -> np.ndarray:
                cfg = spans[:, 0] + u[:, :m] * spans[:, 1]
                xs = cfg[:, :k]
                zs = cfg[:, k::2] + 1j * cfg[:, k + 1 :: 2]
                t = np.empty((len(u), dt))
                jac = np.full(len(u), box_vol)
                for j in range(dt):
                    t[:, j], col = _tan_map(u[:, m + j])
                    jac *= col
                qc = _row_monic_coeffs(xs, zs)
                coeffs = np.zeros((len(u), n + 1))
                for j in range(dt):
                    coeffs[:, j : j + m + 1] += qc * t[:, j, None]
                vals = dens.product(coeffs)
                live = vals > 0.0
                if live.any():
                    vals[live] *= 2.0**l * _row_vandermonde_abs(
                        _row_all_points(xs[live], zs[live])
                    )
                    tl = t[live]
                    for i in range(k):
                        vals[live] *= _t_weight(tl, xs[live, i], squared=False)
                    for i in range(l):
                        vals[live] *= _t_weight(tl, zs[live, i], squared=True)
                return vals * jac

            bud = budget if budget is not None else _DEFAULT_QMC_BUDGET
            res = integrate_unit_cube(
                g_flat, m + dt, mode="quasi-random", budget=bud, rng=rng.shifted(bi)
            )
        total_v += res.value
        total_e += res.error_estimate
        total_n += res.evaluations
    return IntegrationResult(total_v, total_e, max(total_n, 1))


def limit_integral(
    h: WeightedHeight,
    region: Region,
    budget: int | None = None,
    rng: RngStream | None = None,
    tol: float = DEFAULT_ABS_TOL,
) -> float:
    """Vol(ball) / (2 zeta(n+1)) times the density integral over the region.

    This is the limiting value of the normalized counting function for the
    region.
    """
    res = rho_region_integral(h, region, budget=budget, rng=rng, tol=tol)
    from .heights import ball_volume

    return ball_volume(h) / (2.0 * zeta(h.n + 1)) * res.value
