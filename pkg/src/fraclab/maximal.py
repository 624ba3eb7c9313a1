"""One-sided and centred Hardy-Littlewood maximal functions, and domination checks.

Averages are taken over a finite lattice of scales. Interval averages come
from a cumulative integral of ``|u|`` on a fine node set (Gauss-Legendre per
cell, breakpoints as nodes) read off with cubic Hermite interpolation, so
arbitrary scales cost the same as dyadic ones. The ``h -> 0`` limit
``|u(t)|`` is always part of the lattice (listed as scale 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from fraclab.errors import KernelNotMonotone, ParameterOutOfRange, WindowTooNarrow
from fraclab.funcspace.catalog import (
    SampledFunction1D,
    SampledFunctionND,
    as_closed_form_1d,
    as_closed_form_nd,
)
from fraclab.funcspace.closed_form import ClosedForm1D
from fraclab.funcspace.closed_form_nd import ClosedFormND
from fraclab.funcspace.grid import Grid1D, GridND
from fraclab.quadrature import ball_volume, gauss_jacobi, gauss_legendre, sphere_rule

#: cap on the number of cells of the cumulative-integral mesh
FINE_BUDGET = 2_000_000


def geometric_scales(h_min: float, h_max: float, per_octave: int = 16, include_zero: bool = True) -> np.ndarray:
    """``h_min * 2**(k / per_octave)`` up to ``h_max``; dyadic values are hit exactly."""
    if not 0 < h_min <= h_max:
        raise ParameterOutOfRange(f"need 0 < h_min <= h_max: {h_min}, {h_max}")
    k = np.arange(0, math.floor(per_octave * math.log2(h_max / h_min) + 1e-9) + 1)
    h = h_min * 2.0 ** (k / per_octave)
    return np.concatenate([[0.0], h]) if include_zero else h


def default_scales(grid: Grid1D | GridND, per_octave: int = 16) -> np.ndarray:
    """From one grid cell up to the whole span, in dyadic steps of 2**(1/per_octave)."""
    axes = (grid,) if isinstance(grid, Grid1D) else grid.axes
    h = min(a.h for a in axes)
    span = max(a.span for a in axes)
    h0 = 2.0 ** math.floor(math.log2(h))
    return geometric_scales(h0, span, per_octave)


@dataclass(frozen=True)
class MaximalResult:
    """Maximal-function values on an interior window.

    ``argmax_scale`` is the lattice scale attaining the discrete sup (0
    means the ``h -> 0`` limit won). ``overflow_scale`` is the smallest scale
    whose average was not finite, if any.
    """

    t: np.ndarray
    values: np.ndarray
    argmax_scale: np.ndarray
    scale_lattice: np.ndarray
    overflow_scale: float | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def to_csv(self) -> str:
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        pts = np.atleast_2d(self.t.T).T if self.t.ndim == 1 else self.t
        names = ["t", "x2", "x3"][: pts.shape[1]]
        w.writerow(names + ["value", "argmax_scale"])
        for x, v, h in zip(pts, self.values, self.argmax_scale):
            w.writerow([repr(float(c)) for c in x] + [repr(float(v)), repr(float(h))])
        return buf.getvalue()


def _eval_points_1d(f, grid, window, points):
    if points is not None:
        return np.atleast_1d(np.asarray(points, dtype=float))
    if grid is None:
        raise WindowTooNarrow("no grid or evaluation points given")
    if window is None:
        t = grid.interior()
    else:
        t = grid.points[grid.window_mask(*window)]
    if t.size == 0:
        raise WindowTooNarrow("the evaluation window contains no grid points")
    return t


class CumulativeAbs:
    """``F(x) = int_{x0}^x |u|`` on ``[x0, x1]`` for a 1D closed form."""

    def __init__(self, cf: ClosedForm1D, x0: float, x1: float, dx: float) -> None:
        n_cells = max(1, math.ceil((x1 - x0) / dx))
        if n_cells > FINE_BUDGET:
            n_cells = FINE_BUDGET
        nodes = np.linspace(x0, x1, n_cells + 1)
        brk = [b for b in cf.breakpoints if x0 < b < x1]
        if brk:
            nodes = np.unique(np.concatenate([nodes, brk]))
        u, w = gauss_legendre(4)
        left, width = nodes[:-1], np.diff(nodes)
        x = left[:, None] + width[:, None] * u[None, :]
        with np.errstate(over="ignore", invalid="ignore"):
            cell = (np.abs(cf.value(x)) @ w) * width
            F = np.concatenate([[0.0], np.cumsum(cell)])
            slope = np.abs(cf.value(nodes))
        for b in brk:
            # one-sided limits differ at a jump; use their mean as the slope
            i = int(np.searchsorted(nodes, b))
            eps = 1e-9 * max(1.0, abs(b))
            slope[i] = 0.5 * (abs(float(cf.value(b - eps))) + abs(float(cf.value(b + eps))))
        self.finite = bool(np.all(np.isfinite(F)))
        self.nodes = nodes
        self.F = F
        if self.finite:
            self._spline = CubicHermiteSpline(nodes, F, slope)
        else:
            self._spline = None

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self._spline is not None:
            return self._spline(x)
        return np.interp(x, self.nodes, self.F)


def _fine_dx(cf: ClosedForm1D, grid: Grid1D | None, extent: float) -> float:
    dx = min(cf.feature_scale / 16.0, 0.05)
    if grid is not None:
        dx = min(dx, grid.h / 4.0)
    return max(dx, extent / FINE_BUDGET)


def _one_sided(f, lattice, grid, window, points, side: int) -> MaximalResult:
    if isinstance(f, SampledFunction1D):
        grid = grid or f.grid
    cf = as_closed_form_1d(f)
    t = _eval_points_1d(cf, grid, window, points)
    scales = np.asarray(lattice if lattice is not None else default_scales(grid), dtype=float)
    if scales.size == 0 or np.any(scales < 0):
        raise ParameterOutOfRange("scale lattice must be non-empty and non-negative")
    H = float(scales.max())
    lo, hi = (t.min() - H, t.max()) if side < 0 else (t.min(), t.max() + H)
    cum = CumulativeAbs(cf, lo, hi, _fine_dx(cf, grid, hi - lo))
    Ft = cum(t)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        avgs = np.empty((scales.size, t.size))
        for k, h in enumerate(scales):
            if h == 0:
                avgs[k] = np.abs(cf.value(t))
            elif side < 0:
                avgs[k] = (Ft - cum(t - h)) / h
            else:
                avgs[k] = (cum(t + h) - Ft) / h
    bad = ~np.isfinite(avgs)
    overflow = float(scales[np.nonzero(bad.any(axis=1))[0][0]]) if bad.any() or not cum.finite else None
    if not cum.finite and overflow is None:
        overflow = H
    avgs = np.where(bad, np.inf, np.maximum(avgs, 0.0))
    i = np.argmax(avgs, axis=0)
    return MaximalResult(t, avgs[i, np.arange(t.size)], scales[i], scales, overflow)


def m_minus(f, lattice=None, grid: Grid1D | None = None, window=None, points=None) -> MaximalResult:
    r"""``M^- u(t) = sup_h (1/h) int_{t-h}^t |u|`` over the scale lattice."""
    return _one_sided(f, lattice, grid, window, points, -1)


def m_plus(f, lattice=None, grid: Grid1D | None = None, window=None, points=None) -> MaximalResult:
    r"""``M^+ u(t) = sup_h (1/h) int_t^{t+h} |u|`` over the scale lattice."""
    return _one_sided(f, lattice, grid, window, points, +1)


# -- centred Hardy-Littlewood ---------------------------------------------------------


def _as_1d(f) -> ClosedForm1D:
    """A 1D closed form from 1D data or from an n-D closed form with ``n == 1``."""
    from fraclab.funcspace.closed_form import Callable1D
    from fraclab.funcspace.closed_form_nd import Radial, Separable

    if isinstance(f, SampledFunctionND):
        f = f.evaluator
    if isinstance(f, Separable):
        return f.factors[0]
    if isinstance(f, ClosedFormND):
        if isinstance(f, Radial):
            lo, hi = f.profile.support
            c = f.center[0]
            brk = tuple(sorted({c + lo, c + hi} | {c + b for b in f.profile.breakpoints}))
            brk = brk if f.profile.breakpoints else ()
        else:
            brk = ()
        lo_b, hi_b = f.support_box()
        return Callable1D(lambda t: f.value(np.asarray(t)[..., None]), None, None,
                          (float(lo_b[0]), float(hi_b[0])), f.feature_scale, brk, f.decay_class)
    return as_closed_form_1d(f)



def _points_nd(grid, window, points, n):
    if points is not None:
        X = np.asarray(points, dtype=float)
        return X.reshape(-1, n)
    if grid is None:
        raise WindowTooNarrow("no grid or evaluation points given")
    if isinstance(grid, Grid1D):
        grid = GridND((grid,))
    if window is None:
        X = grid.interior_points()
    else:
        P = grid.points()
        lo = np.array([w[0] for w in window])
        hi = np.array([w[1] for w in window])
        X = P[np.all((P >= lo - 1e-12) & (P <= hi + 1e-12), axis=1)]
    if X.size == 0:
        raise WindowTooNarrow("the evaluation window contains no grid points")
    return X


def _ball_cumulative(cf: ClosedFormND, X: np.ndarray, R: float, dr: float, n_angles: int):
    """Per point, ``G(rho) = int_{|y| < rho} |u(x + y)| dy`` at radial cell edges."""
    n = cf.n
    dirs, dw = sphere_rule(n, n_angles)
    cells = max(1, math.ceil(R / dr))
    edges = np.linspace(0.0, R, cells + 1)
    u, w = gauss_legendre(4)
    rho = (edges[:-1, None] + np.diff(edges)[:, None] * u[None, :]).ravel()
    wr = np.tile(w, cells) * np.repeat(np.diff(edges), 4)
    out_G = np.empty((X.shape[0], cells + 1))
    out_dG = np.empty((X.shape[0], cells + 1))
    for i, x in enumerate(X):
        Y = x[None, None, :] + rho[:, None, None] * dirs[None, :, :]
        A = np.abs(cf.value(Y.reshape(-1, n))).reshape(rho.size, -1) @ dw
        cell = (A * rho ** (n - 1) * wr).reshape(cells, 4).sum(axis=1)
        out_G[i] = np.concatenate([[0.0], np.cumsum(cell)])
        Ye = x[None, None, :] + edges[:, None, None] * dirs[None, :, :]
        Ae = np.abs(cf.value(Ye.reshape(-1, n))).reshape(edges.size, -1) @ dw
        out_dG[i] = Ae * edges ** (n - 1)
    return edges, out_G, out_dG


def m_hl(f, lattice=None, grid=None, window=None, points=None, n_angles: int = 64) -> MaximalResult:
    """Centred Hardy-Littlewood maximal function over a lattice of radii."""
    if isinstance(f, (SampledFunctionND, SampledFunction1D)):
        grid = grid or f.grid
    n = f.dim if isinstance(f, SampledFunctionND) else (grid.dim if isinstance(grid, GridND) else 1)
    radii = np.asarray(lattice if lattice is not None else default_scales(grid) / 2.0, dtype=float)
    if radii.size == 0 or np.any(radii < 0):
        raise ParameterOutOfRange("radius lattice must be non-empty and non-negative")
    if n == 1:
        cf1 = _as_1d(f)
        g1 = grid if isinstance(grid, Grid1D) or grid is None else grid.axes[0]
        t = _eval_points_1d(cf1, g1, window if window is None or np.ndim(window) == 1 else window[0],
                            None if points is None else np.asarray(points, dtype=float).ravel())
        R = float(radii.max())
        cum = CumulativeAbs(cf1, t.min() - R, t.max() + R, _fine_dx(cf1, g1, np.ptp(t) + 2 * R))
        with np.errstate(over="ignore", invalid="ignore"):
            avgs = np.array([
                np.abs(cf1.value(t)) if r == 0 else (cum(t + r) - cum(t - r)) / (2 * r) for r in radii
            ])
        X = t
    else:
        cf = as_closed_form_nd(f, n)
        X = _points_nd(grid, window, points, n)
        R = float(radii.max())
        dr = min(cf.feature_scale / 8.0, R / 64.0, 0.05)
        edges, G, dG = _ball_cumulative(cf, X, R, dr, n_angles)
        avgs = np.empty((radii.size, X.shape[0]))
        for i in range(X.shape[0]):
            spl = CubicHermiteSpline(edges, G[i], dG[i])
            with np.errstate(divide="ignore", invalid="ignore"):
                avgs[:, i] = spl(radii) / ball_volume(n, radii)
        zero = radii == 0
        if zero.any():
            avgs[zero] = np.abs(cf.value(X))[None, :]
    bad = ~np.isfinite(avgs)
    overflow = float(radii[np.nonzero(bad.any(axis=1))[0][0]]) if bad.any() else None
    avgs = np.where(bad, np.inf, np.maximum(avgs, 0.0))
    k = np.argmax(avgs, axis=0)
    return MaximalResult(X, avgs[k, np.arange(avgs.shape[1])], radii[k], radii, overflow)


# -- convolution kernels and the domination checks ------------------------------------


@dataclass(frozen=True)
class Kernel1D:
    """A nonnegative kernel ``eta`` on ``[0, length]`` (``length`` may be inf).

    ``singular_power`` is ``b`` when ``eta(t) ~ t**b`` near 0 (``b > -1``).
    """

    name: str
    fn: object
    length: float
    singular_power: float = 0.0
    decay_rate: float = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where((t > 0) & (t <= self.length), self.fn(np.where(t > 0, t, 1.0)), 0.0)

    def reach(self) -> float:
        if math.isfinite(self.length):
            return self.length
        return 40.0 / self.decay_rate


def indicator_kernel(length: float = 1.0) -> Kernel1D:
    return Kernel1D(f"indicator[0,{length:g}]", lambda t: np.ones_like(t), length)


def power_kernel(alpha: float = 0.5, length: float = 1.0) -> Kernel1D:
    """``t**-alpha`` on ``(0, length]``."""
    return Kernel1D(f"t^-{alpha:g}", lambda t: t ** (-alpha), length, -alpha)


def exp_kernel(rate: float = 1.0) -> Kernel1D:
    return Kernel1D(f"exp(-{rate:g}t)", lambda t: np.exp(-rate * t), math.inf, 0.0, rate)


LORENTE_KERNELS = (indicator_kernel(1.0), power_kernel(0.5), exp_kernel(1.0))


def _tau_rule(cf: ClosedForm1D, t: float, eta: Kernel1D, side: int = -1):
    """Nodes/weights for ``int_0^L g(tau) eta(tau) dtau`` with ``u(t + side*tau)`` breakpoints split."""
    L = eta.reach()
    cuts = {0.0, L}
    for b in cf.breakpoints:
        tau = side * (b - t)
        if 0 < tau < L:
            cuts.add(tau)
    lo_s, hi_s = cf.support
    for b in (lo_s, hi_s):
        if math.isfinite(b):
            tau = side * (b - t)
            if 0 < tau < L:
                cuts.add(tau)
    cuts = sorted(cuts)
    nodes, weights = [], []
    scale = min(cf.feature_scale, 1.0 / eta.decay_rate if eta.decay_rate else math.inf, 0.25)
    for a, b in zip(cuts, cuts[1:]):
        if a == 0 and eta.singular_power != 0:
            r, w = gauss_jacobi(48, eta.singular_power)
            x = b * r
            # Jacobi weights carry tau**b; divide it out of eta
            wt = w * b ** (eta.singular_power + 1.0) * eta(x) / x**eta.singular_power
            nodes.append(x)
            weights.append(wt)
            continue
        panels = max(1, math.ceil((b - a) / (scale / 2.0)))
        u, w = gauss_legendre(16)
        e = a + (b - a) * np.arange(panels) / panels
        x = (e[:, None] + (b - a) / panels * u[None, :]).ravel()
        wt = np.tile(w * (b - a) / panels, panels) * eta(x)
        nodes.append(x)
        weights.append(wt)
    return np.concatenate(nodes), np.concatenate(weights)


def one_sided_convolution(f, eta: Kernel1D, t) -> np.ndarray:
    """``(u * eta)(t) = int_0^inf u(t - tau) eta(tau) dtau``."""
    cf = as_closed_form_1d(f)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(t.shape)
    for i, ti in enumerate(t):
        x, w = _tau_rule(cf, ti, eta, -1)
        out[i] = float(np.dot(cf.value(ti - x), w))
    return out


def kernel_mass(eta: Kernel1D) -> float:
    x, w = _tau_rule(_ONE, 0.0, eta, -1)
    return float(np.sum(w))


def _check_monotone(fn, length: float, singular: bool = False) -> None:
    L = length if math.isfinite(length) else 50.0
    x = np.geomspace(1e-6 * L, L, 4001)
    v = np.asarray(fn(x), dtype=float)
    if np.any(np.diff(v) > 1e-12 * (1.0 + np.abs(v[:-1]))):
        raise KernelNotMonotone("kernel is not nonincreasing on its support")
    if np.any(v < 0):
        raise KernelNotMonotone("kernel must be nonnegative")


@dataclass(frozen=True)
class DominationReport:
    """``lhs = |u * eta|`` against ``rhs = (maximal u) * mass(eta)`` at the test points.

    ``margin`` is ``max(lhs - rhs)`` (should not exceed ``tolerance``) and
    ``ratio`` the observed constant ``max(lhs / rhs)``.
    """

    kernel: str
    points: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    mass: float
    margin: float
    ratio: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.margin <= self.tolerance


def _report(name, pts, lhs, rhs, mass, tol):
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(rhs > 0, lhs / rhs, np.where(lhs > tol, np.inf, 0.0))
    return DominationReport(name, pts, lhs, rhs, mass, float(np.max(lhs - rhs)), float(np.max(r)), tol)


def lorente_domination_check(f, eta: Kernel1D, grid: Grid1D | None = None, lattice=None, window=None,
                             tolerance: float = 1e-8, per_octave: int = 32) -> DominationReport:
    """Check ``|u * eta(t)| <= M^- u(t) int eta`` for ``eta`` nonincreasing on [0, inf)."""
    if isinstance(f, SampledFunction1D):
        grid = grid or f.grid
    _check_monotone(eta, eta.length)
    if lattice is None:
        lattice = np.concatenate([[0.0], geometric_scales(grid.h / 64.0, max(grid.span, 2 * eta.reach()), per_octave, False)])
        # every scale at which eta (as a sum of indicators) can jump
        lattice = np.unique(np.concatenate([lattice, [eta.reach()]]))
    M = m_minus(f, lattice, grid=grid, window=window)
    lhs = np.abs(one_sided_convolution(f, eta, M.t))
    mass = kernel_mass(eta)
    return _report(eta.name, M.t, lhs, M.values * mass, mass, tolerance)


@dataclass(frozen=True)
class RadialKernel:
    """``eta(|x|)`` on R^n, positive, radial and decreasing."""

    name: str
    profile: object
    reach: float
    dim: int
    jump: float | None = None

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= self.reach, self.profile(r), 0.0)


def heat_radial_kernel(t: float, n: int) -> RadialKernel:
    c = (4.0 * math.pi * t) ** (-n / 2.0)
    return RadialKernel(f"W_{t:g}", lambda r: c * np.exp(-r * r / (4.0 * t)), math.sqrt(4.0 * t * 40.0), n)


def ball_radial_kernel(radius: float, n: int) -> RadialKernel:
    v = float(ball_volume(n, radius))
    return RadialKernel(f"ball_{radius:g}", lambda r: np.full(np.shape(r), 1.0 / v), radius, n, radius)


def exp_radial_kernel(rate: float, n: int) -> RadialKernel:
    return RadialKernel(f"exp(-{rate:g}|x|)", lambda r: np.exp(-rate * r), 45.0 / rate, n)


def radial_kernels(n: int) -> tuple[RadialKernel, ...]:
    return (heat_radial_kernel(0.5, n), ball_radial_kernel(1.0, n), exp_radial_kernel(1.0, n))


def radial_convolution(f, eta: RadialKernel, X, n_angles: int = 64, dr: float | None = None):
    """``(u * eta)(x) = int eta(|y|) u(x - y) dy`` in polar coordinates about ``x``."""
    n = eta.dim
    cf = as_closed_form_nd(f, n)
    X = np.asarray(X, dtype=float).reshape(-1, n)
    dirs, dw = sphere_rule(n, n_angles)
    dr = dr or max(min(cf.feature_scale / 8.0, 0.05), eta.reach / 400.0)
    cells = max(4, math.ceil(eta.reach / dr))
    u, w = gauss_legendre(8)
    edges = np.linspace(0.0, eta.reach, cells + 1)
    rho = (edges[:-1, None] + np.diff(edges)[:, None] * u[None, :]).ravel()
    wr = np.tile(w, cells) * np.repeat(np.diff(edges), 8) * rho ** (n - 1) * eta(rho)
    out = np.empty(X.shape[0])
    for i, x in enumerate(X):
        Y = x[None, None, :] - rho[:, None, None] * dirs[None, :, :]
        A = cf.value(Y.reshape(-1, n)).reshape(rho.size, -1) @ dw
        out[i] = float(A @ wr)
    return out


def radial_mass(eta: RadialKernel) -> float:
    from fraclab.quadrature import sphere_area

    cells = 2000
    u, w = gauss_legendre(8)
    edges = np.linspace(0.0, eta.reach, cells + 1)
    rho = (edges[:-1, None] + np.diff(edges)[:, None] * u[None, :]).ravel()
    wr = np.tile(w, cells) * np.repeat(np.diff(edges), 8)
    return float(sphere_area(eta.dim) * np.sum(wr * rho ** (eta.dim - 1) * eta(rho)))


def radial_domination_check(f, eta: RadialKernel, grid=None, lattice=None, window=None, points=None,
                            tolerance: float = 1e-6, per_octave: int = 16) -> DominationReport:
    """Check ``|u * eta(x)| <= ||eta||_1 M u(x)`` for radial decreasing ``eta``."""
    if isinstance(f, (SampledFunction1D, SampledFunctionND)):
        grid = grid or f.grid
    r = np.linspace(1e-6, eta.reach, 4001)
    v = eta(r)
    if np.any(np.diff(v) > 1e-12 * (1 + np.abs(v[:-1]))) or np.any(v < 0):
        raise KernelNotMonotone("radial kernel is not nonnegative and decreasing")
    if lattice is None:
        axes = (grid,) if isinstance(grid, Grid1D) else grid.axes
        h = min(a.h for a in axes)
        span = max(a.span for a in axes)
        lattice = geometric_scales(h / 16.0, max(span, 2 * eta.reach), per_octave)
        if eta.jump is not None:
            lattice = np.unique(np.concatenate([lattice, [eta.jump]]))
    M = m_hl(f, lattice, grid=grid, window=window, points=points)
    X = M.t.reshape(-1, eta.dim)
    lhs = np.abs(radial_convolution(f, eta, X))
    mass = radial_mass(eta)
    return _report(eta.name, M.t, lhs, M.values * mass, mass, tolerance)


class _One(ClosedForm1D):
    def value(self, t):
        return np.ones(np.shape(t))

    @property
    def feature_scale(self):
        return math.inf


_ONE = _One()


# -- order suprema ----------------------------------------------------------------------


def order_sup_fracderiv(f, alpha_lattice, quad=None, grid: Grid1D | None = None, window=None,
                        scale_lattice=None) -> MaximalResult:
    """``T* u(t) = max_alpha |(D_left)^alpha u(t)|`` with the ratio to ``M^-u' + M^-u``.

    ``extra`` holds ``ratio`` (pointwise), ``C`` (its maximum) and the
    per-order values.
    """
    from fraclab.fracderiv import marchaud_left
    from fraclab.quadrature import DEFAULT_QUAD

    quad = quad or DEFAULT_QUAD
    if isinstance(f, SampledFunction1D):
        grid = grid or f.grid
    cf = as_closed_form_1d(f)
    alphas = np.asarray(sorted(alpha_lattice), dtype=float)
    if alphas.size == 0:
        raise ParameterOutOfRange("empty order lattice")
    t = _eval_points_1d(cf, grid, window, None)
    vals = np.array([np.abs(marchaud_left(cf, a, quad, points=t).values) for a in alphas])
    k = np.argmax(vals, axis=0)
    lat = scale_lattice if scale_lattice is not None else default_scales(grid)
    mu = m_minus(cf, lat, grid=grid, points=t).values
    mdu = m_minus(cf.derivative(1), lat, grid=grid, points=t).values
    rhs = mu + mdu
    top = vals[k, np.arange(t.size)]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0, top / rhs, 0.0)
    return MaximalResult(t, top, alphas[k], alphas, None,
                         {"ratio": ratio, "C": float(np.max(ratio)), "per_order": vals, "rhs": rhs})


def order_sup_fraclap(f, s_lattice, eps_lattice, quad=None, grid=None, window=None, points=None,
                      radius_lattice=None, n: int | None = None) -> MaximalResult:
    """``max_{s, eps} |T_{s,eps} u(x)|`` with the ratio to ``M(D^2 u) + M u``."""
    from fraclab.fraclap import truncated_family
    from fraclab.quadrature import DEFAULT_QUAD

    quad = quad or DEFAULT_QUAD
    if isinstance(f, (SampledFunction1D, SampledFunctionND)):
        grid = grid or f.grid
    if n is None:
        n = f.dim if isinstance(f, SampledFunctionND) else (grid.dim if isinstance(grid, GridND) else 1)
    cf = as_closed_form_nd(f, n)
    s_vals = np.asarray(sorted(s_lattice), dtype=float)
    e_vals = np.asarray(sorted(eps_lattice), dtype=float)
    if s_vals.size == 0 or e_vals.size == 0:
        raise ParameterOutOfRange("empty order or epsilon lattice")
    if isinstance(grid, Grid1D):
        grid = GridND((grid,))
    X = _points_nd(grid, window, points, n)
    # the estimate integrates u(x - y) - u(x), the negative of T_{s,eps}; only |.| enters
    _, fam, _ = truncated_family(cf, s_vals, e_vals, quad, points=X)
    vals = np.abs(fam).reshape(-1, X.shape[0])
    pairs = [(s, e) for s in s_vals for e in e_vals]
    k = np.argmax(vals, axis=0)
    radii = radius_lattice if radius_lattice is not None else default_scales(grid) / 2.0
    Mu = m_hl(cf, radii, grid=grid, points=X).values
    MD2 = m_hl(_HessNorm(cf), radii, grid=grid, points=X).values
    rhs = Mu + MD2
    top = vals[k, np.arange(X.shape[0])]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0, top / rhs, 0.0)
    arg = np.array([pairs[i][0] for i in k])
    return MaximalResult(X if n > 1 else X[:, 0], top, arg, s_vals, None,
                         {"ratio": ratio, "C": float(np.max(ratio)), "eps": np.array([pairs[i][1] for i in k]),
                          "rhs": rhs})


class _HessNorm(ClosedFormND):
    """``|D^2 u|`` (Frobenius) as a function, for ``M(D^2 u)``."""

    def __init__(self, cf: ClosedFormND) -> None:
        self.cf = cf
        self.n = cf.n

    def value(self, X):
        return self.cf.hess_norm(X)

    @property
    def feature_scale(self):
        return self.cf.feature_scale

    def support_box(self):
        return self.cf.support_box()
