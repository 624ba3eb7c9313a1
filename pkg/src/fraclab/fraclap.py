"""Heat semigroup and the fractional Laplacian on R^n (n <= 3).

Three evaluation routes:

* ``semigroup``: ``1/Gamma(-s) int_0^inf (e^{t Delta} u - u) t^(-1-s) dt``.
  On ``(0, 1]`` the difference is rewritten through
  ``e^{t Delta} u - u = int_0^t e^{r Delta} Delta u dr``, which leaves
  ``(1/s) int_0^1 e^{r Delta} Delta u (r^-s - 1) dr`` (Gauss-Jacobi in r).
  Beyond ``t = 1`` the heat values are integrated on log-spaced panels and
  closed with the large-time asymptotics ``mass * (4 pi t)^(-n/2)``.
* ``pv``: ``c_{n,s}/2 int (2u(x) - u(x+z) - u(x-z)) |z|^(-n-2s) dz`` in
  polar coordinates; near the origin the symmetric second difference is
  replaced by its integral Taylor remainder in ``D^2 u``.
* ``spectral``: discrete Fourier multiplier ``|xi|^(2s)`` (an oracle for
  periodic samples).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ive

from fraclab.errors import (
    DivergentTail,
    NonPeriodicInput,
    ParameterOutOfRange,
    QuadratureNotConverged,
    TruncationBudgetExceeded,
)
from fraclab.funcspace.catalog import SampledFunction1D, SampledFunctionND, as_closed_form_nd
from fraclab.funcspace.closed_form import ClosedForm1D, Constant, Cosine, ExpGrowth
from fraclab.funcspace.closed_form_nd import ClosedFormND, Radial, Separable
from fraclab.funcspace.grid import Grid1D, GridND
from fraclab.quadrature import (
    DEFAULT_QUAD,
    QuadratureSpec,
    gauss_hermite,
    gauss_jacobi,
    gauss_legendre,
    linear_rule,
    sphere_area,
    sphere_rule,
)
from fraclab.report import SweepReport
from fraclab.special import FracOrder, as_order, cns, gamma

#: half-width of the heat-kernel window in units of 2 sqrt(t); erfc(5.5) < 1e-13
KERNEL_WIDTH = 5.5
#: Gauss-Hermite nodes for periodic and exponential data
HERMITE_NODES = 150
#: upper limit of the numerically integrated time range
TIME_CUTOFF = 1e4
#: nodes per point above which a heat evaluation is refused
HEAT_BUDGET = 4_000_000
_BLOCK = 1_000_000


@dataclass(frozen=True)
class HeatEvaluation:
    t: float
    points: np.ndarray
    values: np.ndarray
    kernel_truncation_radius: float
    error: np.ndarray = field(default=None, repr=False)


@dataclass(frozen=True)
class FracLapResult:
    points: np.ndarray
    values: np.ndarray
    s: FracOrder
    method: str
    error: np.ndarray = field(default=None, repr=False)
    extra: dict = field(default_factory=dict, compare=False)

    def to_csv(self) -> str:
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        pts = self.points.reshape(len(self.values), -1)
        w.writerow(["t", "x2", "x3"][: pts.shape[1]] + ["value", "error"])
        for x, v, e in zip(pts, self.values, self.error):
            w.writerow([repr(float(c)) for c in x] + [repr(float(v)), repr(float(e))])
        return buf.getvalue()


# -- evaluation points ------------------------------------------------------------------------


def _resolve(f, n, grid, window, points):
    if isinstance(f, (SampledFunction1D, SampledFunctionND)):
        grid = grid or f.grid
    if n is None:
        if isinstance(f, SampledFunctionND):
            n = f.dim
        elif isinstance(f, ClosedFormND):
            n = f.n
        elif isinstance(grid, GridND):
            n = grid.dim
        else:
            n = 1
    cf = as_closed_form_nd(f, n)
    if points is not None:
        X = np.asarray(points, dtype=float).reshape(-1, cf.n)
    else:
        if grid is None:
            raise ParameterOutOfRange("pass a sampled function, a grid or explicit points")
        g = GridND((grid,)) if isinstance(grid, Grid1D) else grid
        if window is None:
            X = g.interior_points()
        else:
            P = g.points()
            win = [window] if np.ndim(window) == 1 else window
            lo = np.array([w[0] for w in win])
            hi = np.array([w[1] for w in win])
            X = P[np.all((P >= lo - 1e-12) & (P <= hi + 1e-12), axis=1)]
    return cf, X


# -- heat semigroup ------------------------------------------------------------------------------


def _heat_1d(g: ClosedForm1D, x: np.ndarray, t: float, refine: int = 1) -> np.ndarray:
    """``int W_t(y) g(x - y) dy`` for a 1D closed form."""
    x = np.asarray(x, dtype=float)
    if isinstance(g, Constant):
        return np.full(x.shape, float(g.c))
    if isinstance(g, Cosine):
        if 2.0 * math.sqrt(t) * g.k > 12.0:
            return np.zeros(x.shape)
    if isinstance(g, (Cosine, ExpGrowth)) or g.period is not None:
        z, w = gauss_hermite(HERMITE_NODES * refine)
        return g.value(x[..., None] - 2.0 * math.sqrt(t) * z) @ w
    r = 2.0 * math.sqrt(t) * KERNEL_WIDTH
    lo, hi = g.support
    a = np.maximum(x - r, lo)
    b = np.minimum(x + r, hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) and not np.all(np.isfinite(a) & np.isfinite(b)):
        raise TruncationBudgetExceeded("unbounded window")
    feat = g.feature_scale if math.isfinite(g.feature_scale) else math.inf
    width = min(math.sqrt(t), feat) / refine
    span = float(np.max(b - a)) if np.any(b > a) else 0.0
    if span <= 0:
        return np.zeros(x.shape)
    panels = max(1, math.ceil(span / width))
    if panels * 16 > HEAT_BUDGET:
        raise TruncationBudgetExceeded(f"heat evaluation needs {panels * 16} nodes per point")
    flat_a, flat_b = a.ravel(), b.ravel()
    Y, W = linear_rule(flat_a, flat_b, panels, 16)
    d = x.ravel()[:, None] - Y
    ker = np.exp(-d * d / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
    return np.sum(W * ker * g.value(Y), axis=1).reshape(x.shape)


def _heat_generic(cf: ClosedFormND, X: np.ndarray, t: float, refine: int = 1, field_fn=None) -> np.ndarray:
    """Tensor Gauss-Legendre convolution over (kernel window) intersected with the support box."""
    n = cf.n
    fn = field_fn or cf.value
    r = 2.0 * math.sqrt(t) * KERNEL_WIDTH
    lo, hi = cf.support_box()
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise TruncationBudgetExceeded("generic heat evaluation needs a bounded support box")
    width = min(math.sqrt(t), cf.feature_scale) / refine
    out = np.empty(X.shape[0])
    u, w = gauss_legendre(8)
    for i, x in enumerate(X):
        a = np.maximum(x - r, lo)
        b = np.minimum(x + r, hi)
        if np.any(b <= a):
            out[i] = 0.0
            continue
        axes_nodes, axes_w = [], []
        for k in range(n):
            p = max(1, math.ceil((b[k] - a[k]) / width))
            e = a[k] + (b[k] - a[k]) * np.arange(p) / p
            axes_nodes.append((e[:, None] + (b[k] - a[k]) / p * u[None, :]).ravel())
            axes_w.append(np.tile(w * (b[k] - a[k]) / p, p))
        total = math.prod(len(v) for v in axes_nodes)
        if total > HEAT_BUDGET:
            raise TruncationBudgetExceeded(f"heat evaluation needs {total} nodes per point")
        mesh = np.meshgrid(*axes_nodes, indexing="ij")
        Y = np.stack([m.ravel() for m in mesh], axis=1)
        Wt = axes_w[0]
        for v in axes_w[1:]:
            Wt = np.multiply.outer(Wt, v)
        d2 = np.sum((Y - x) ** 2, axis=1)
        ker = np.exp(-d2 / (4.0 * t)) / (4.0 * math.pi * t) ** (n / 2.0)
        out[i] = float(np.sum(Wt.ravel() * ker * fn(Y)))
    return out


def _heat_radial(cf: Radial, X: np.ndarray, t: float, refine: int = 1, laplacian: bool = False) -> np.ndarray:
    """Radial data: the angular integral of the kernel is a modified Bessel function."""
    n = cf.n
    a = np.sqrt(np.sum((X - np.asarray(cf.center)) ** 2, axis=1))
    R = float(cf.profile.support[1])
    r = 2.0 * math.sqrt(t) * KERNEL_WIDTH
    lo = np.maximum(a - r, 0.0)
    hi = np.minimum(a + r, R)
    out = np.zeros(X.shape[0])
    ok = hi > lo
    if not np.any(ok):
        return out
    width = min(math.sqrt(t), cf.feature_scale / 4.0) / refine
    panels = max(2, math.ceil(float(np.max(hi[ok] - lo[ok])) / width))
    if panels * 16 > HEAT_BUDGET:
        raise TruncationBudgetExceeded(f"heat evaluation needs {panels * 16} nodes per point")
    rho, w = linear_rule(lo[ok], hi[ok], panels, 16)
    if laplacian:
        e = np.zeros(n)
        e[0] = 1.0
        prof = cf.laplacian(rho.reshape(-1, 1) * e + np.asarray(cf.center)).reshape(rho.shape)
    else:
        prof = cf.profile.value(rho)
    aa = a[ok][:, None]
    z = aa * rho / (2.0 * t)
    nu = n / 2.0 - 1.0
    # Gamma(n/2) (z/2)^(-nu) I_nu(z) e^-z, with its z -> 0 limit
    with np.errstate(divide="ignore", invalid="ignore"):
        avg = np.where(z > 1e-8, gamma(n / 2.0) * (z / 2.0) ** (-nu) * ive(nu, z), 1.0)
    ker = sphere_area(n) * avg * np.exp(-((aa - rho) ** 2) / (4.0 * t)) / (4.0 * math.pi * t) ** (n / 2.0)
    out[ok] = np.sum(w * rho ** (n - 1) * ker * prof, axis=1)
    return out


def _heat_points(cf: ClosedFormND, X: np.ndarray, t: float, refine: int = 1, laplacian: bool = False) -> np.ndarray:
    """``e^{t Delta} u`` (or ``e^{t Delta} Delta u``) at the rows of X."""
    if isinstance(cf, Separable):
        H0 = [_heat_1d(f, X[:, i], t, refine) for i, f in enumerate(cf.factors)]
        if not laplacian:
            return np.prod(H0, axis=0)
        out = np.zeros(X.shape[0])
        for i, f in enumerate(cf.factors):
            term = _heat_1d(f.derivative(2), X[:, i], t, refine)
            for j in range(cf.n):
                if j != i:
                    term = term * H0[j]
            out = out + term
        return out
    if isinstance(cf, Radial) and math.isfinite(cf.profile.support[1]):
        return _heat_radial(cf, X, t, refine, laplacian)
    return _heat_generic(cf, X, t, refine, cf.laplacian if laplacian else None)


def heat_semigroup(f, t: float, quad: QuadratureSpec = DEFAULT_QUAD, grid=None, window=None, points=None,
                   n: int | None = None) -> HeatEvaluation:
    r"""``e^{t Delta} u(x) = int W_t(x - y) u(y) dy`` with ``W_t = (4 pi t)^(-n/2) exp(-|x|^2 / 4t)``.

    The kernel is cut where its tail mass falls below 1e-12; periodic and
    exponential data use Gauss-Hermite quadrature in the kernel variable.
    """
    if not (isinstance(t, (int, float)) and t > 0):
        raise ParameterOutOfRange(f"diffusion time must be positive: {t}")
    cf, X = _resolve(f, n, grid, window, points)
    v1 = _heat_points(cf, X, float(t), 1)
    v2 = _heat_points(cf, X, float(t), 2)
    return HeatEvaluation(float(t), X, v2, 2.0 * math.sqrt(t) * KERNEL_WIDTH, np.abs(v2 - v1))


# -- semigroup formula ---------------------------------------------------------------------------------


def _large_time(cf: ClosedFormND):
    """``(coef, d)`` with ``e^{t Delta} u(x) ~ coef * (4 pi t)^(-d/2)`` for large t, or None if it decays faster."""
    if isinstance(cf, Separable):
        coef, d = 1.0, 0
        for f in cf.factors:
            if isinstance(f, Constant):
                coef *= f.c
            elif isinstance(f, ExpGrowth):
                raise DivergentTail("the heat flow of an exponential grows in time")
            elif isinstance(f, Cosine) or f.period is not None:
                return None
            else:
                m = getattr(f, "mass", None)
                if m is None:
                    m = _mass_1d(f)
                coef *= m
                d += 1
        return coef, d
    if isinstance(cf, Radial):
        return _mass_radial(cf), cf.n
    lo, hi = cf.support_box()
    if np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)):
        return math.nan, cf.n
    raise DivergentTail("no large-time asymptotics for this function")


def _mass_1d(f: ClosedForm1D) -> float:
    lo, hi = f.support
    x, w = linear_rule([lo], [hi], max(4, math.ceil((hi - lo) / f.feature_scale) * 2), 16)
    return float(np.sum(w[0] * f.value(x[0])))


def _mass_radial(cf: Radial) -> float:
    lo, hi = cf.profile.support
    R = max(abs(lo), abs(hi))
    cuts = sorted({0.0, R} | {abs(b) for b in cf.profile.breakpoints if 0 < abs(b) < R})
    tot = 0.0
    for a, b in zip(cuts, cuts[1:]):
        x, w = linear_rule([a], [b], 64, 16)
        tot += float(np.sum(w[0] * x[0] ** (cf.n - 1) * cf.profile.value(x[0])))
    return sphere_area(cf.n) * tot if cf.n > 1 else 2.0 * tot


def _time_rule(a: float, b: float, dy: float, order: int):
    p = max(1, math.ceil(math.log(b / a) / dy))
    u, w = gauss_legendre(order)
    e = math.log(a) + (math.log(b) - math.log(a)) * np.arange(p) / p
    y = (e[:, None] + (math.log(b) - math.log(a)) / p * u[None, :]).ravel()
    wy = np.tile(w * (math.log(b) - math.log(a)) / p, p)
    tau = np.exp(y)
    return tau, wy * tau


def _semigroup_once(cf, X, s, quad, refine):
    u0 = cf.value(X)
    # (0, 1]: (1/s) int_0^1 e^{r Delta} Delta u (r^-s - 1) dr
    # the integrand varies on the time scale feature^2; Gauss-Jacobi below that, log panels above
    feat = cf.feature_scale if math.isfinite(cf.feature_scale) else 1.0
    d = min(1.0, feat * feat / 16.0)
    rj, wj = gauss_jacobi(quad.n_singular, -s)
    rl, wl = gauss_legendre(quad.n_singular)
    rn = np.concatenate([d * rj, d * rl])
    wn = np.concatenate([wj * d ** (1.0 - s), -wl * d])
    if d < 1.0:
        tg, wg = _time_rule(d, 1.0, 2.5 * quad.panel_dy, quad.n_tail)
        rn = np.concatenate([rn, tg])
        wn = np.concatenate([wn, wg * (tg ** (-s) - 1.0)])
    near = np.zeros(X.shape[0])
    for r, w in zip(rn, wn):
        near += w * _heat_points(cf, X, float(r), refine, laplacian=True)
    near /= s
    # (1, T]: heat values against t^(-1-s), then the analytic tail
    lt = _large_time(cf)
    T = TIME_CUTOFF if lt is not None else max(60.0, 1.0)
    if lt is None:
        k_min = min(f.k for f in cf.factors if isinstance(f, Cosine))
        T = max(2.0, 40.0 / k_min**2)
    tau, wt = _time_rule(1.0, T, 2.5 * quad.panel_dy, quad.n_tail)
    far = np.zeros(X.shape[0])
    for t, w in zip(tau, wt):
        far += w * t ** (-1.0 - s) * _heat_points(cf, X, float(t), refine)
    tail = 0.0
    if lt is not None:
        coef, d = lt
        if math.isnan(coef):
            raise DivergentTail("unknown mass for the large-time tail")
        tail = coef * (4.0 * math.pi) ** (-d / 2.0) * T ** (-d / 2.0 - s) / (d / 2.0 + s)
    return (near + far + tail - u0 / s) / gamma(-s)


def _is_constant(cf) -> bool:
    return isinstance(cf, Separable) and cf.is_constant


def frac_laplacian_semigroup(f, s, quad: QuadratureSpec = DEFAULT_QUAD, grid=None, window=None, points=None,
                             n: int | None = None) -> FracLapResult:
    r"""``(-Delta)^s u = 1/Gamma(-s) int_0^inf (e^{t Delta} u - u) t^(-1-s) dt``."""
    order = as_order(s, "s")
    cf, X = _resolve(f, n, grid, window, points)
    if _is_constant(cf):
        z = np.zeros(X.shape[0])
        return FracLapResult(X, z, order, "semigroup", z.copy())
    v1 = _semigroup_once(cf, X, order.value, quad, 1)
    v2 = _semigroup_once(cf, X, order.value, quad.refined(), 2)
    err = np.abs(v2 - v1)
    _check(err, v2, quad)
    return FracLapResult(X, v2, order, "semigroup", err)


def _check(err, vals, quad):
    if quad.check_convergence and np.any(err > quad.tolerance * (1.0 + np.abs(vals))):
        worst = float(np.max(err / (1.0 + np.abs(vals))))
        raise QuadratureNotConverged(f"refinement changed the value by {worst:.3g} (relative)")


# -- principal value -----------------------------------------------------------------------------------


def _angles_for(rho: float, feature: float, base: int, n: int) -> int:
    if n == 1:
        return 2
    m = max(base, math.ceil(2.0 * math.pi * rho / (feature / 4.0)))
    m += m % 2
    return min(m, 1024 if n == 2 else 128)


def _sphere_mean_block(cf, X, rho, base, feature):
    """``int_S u(x + rho theta) dtheta`` for all points and radii."""
    n = cf.n
    out = np.empty((X.shape[0], rho.size))
    ms = np.array([_angles_for(r, feature, base, n) for r in rho])
    for m in np.unique(ms):
        dirs, dw = sphere_rule(n, int(m))
        # keep each block near a million evaluation points
        step = max(1, _BLOCK // (X.shape[0] * dirs.shape[0]))
        for idx in np.array_split(np.nonzero(ms == m)[0], max(1, math.ceil(np.sum(ms == m) / step))):
            Y = X[:, None, None, :] + rho[idx][None, :, None, None] * dirs[None, None, :, :]
            vals = cf.value(Y.reshape(-1, n)).reshape(X.shape[0], idx.size, -1)
            out[:, idx] = vals @ dw
    return out


def _graded(a: float, b: float, dy: float, max_width: float, order: int):
    from fraclab.fracderiv import _graded_rule

    return _graded_rule(float(a), float(b), float(dy), float(max_width), int(order))


def _far_radial(cf: ClosedFormND, X: np.ndarray, s: float, a: float, quad: QuadratureSpec):
    """``int_a^inf rho^(-1-2s) int_S (u(x) - u(x + rho theta)) dtheta drho`` and a truncation bound."""
    n = cf.n
    u0 = cf.value(X)
    area = sphere_area(n)
    first = u0 * area * a ** (-2.0 * s) / (2.0 * s)
    reach = cf.reach(X)
    feature = cf.feature_scale if math.isfinite(cf.feature_scale) else 1.0
    bound = 0.0
    if np.all(np.isfinite(reach)):
        R = float(np.max(reach))
        tail = np.zeros(X.shape[0])
    else:
        R = max(quad.tail_radius, 2.0 * a)
        if isinstance(cf, Separable):
            for f in cf.factors:
                R = max(R, f.min_tail_radius())
        try:
            tail = cf.radial_tail(X, R, -1.0 - 2.0 * s)
        except DivergentTail:
            if any(isinstance(f, ExpGrowth) for f in getattr(cf, "factors", ())):
                raise
            tail = np.zeros(X.shape[0])
            bound = cf.sup_abs * area * R ** (-2.0 * s) / (2.0 * s)
    second = np.zeros(X.shape[0])
    if R > a:
        rho, w = _graded(a, R, quad.panel_dy, max(feature / 2.0, 1e-3), quad.n_tail)
        S = _sphere_mean_block(cf, X, rho, quad.n_angles, feature)
        second = S @ (w * rho ** (-1.0 - 2.0 * s))
    return first - second - tail, bound


def _near_pv(cf: ClosedFormND, X: np.ndarray, s: float, d: float, quad: QuadratureSpec):
    r"""``int_0^d rho^(-1-2s) (1/2) int_S (2u(x) - u(x+rho theta) - u(x-rho theta))``.

    Uses ``2u(x) - u(x+z) - u(x-z) = -rho^2 int_0^1 (1-r) theta^T [D^2u(x+r z) + D^2u(x-r z)] theta dr``.
    """
    n = cf.n
    rj, wj = gauss_jacobi(quad.n_singular, 1.0 - 2.0 * s)
    rho = d * rj
    wr = wj * d ** (2.0 - 2.0 * s)
    rl, wl = gauss_legendre(16)
    dirs, dw = sphere_rule(n, quad.n_angles)
    out = np.zeros(X.shape[0])
    for rk, wk in zip(rho, wr):
        for r, w in zip(rl, wl):
            Z = r * rk * dirs
            Yp = X[:, None, :] + Z[None, :, :]
            Ym = X[:, None, :] - Z[None, :, :]
            Hp = cf.hess(Yp.reshape(-1, n)).reshape(X.shape[0], dirs.shape[0], n, n)
            Hm = cf.hess(Ym.reshape(-1, n)).reshape(X.shape[0], dirs.shape[0], n, n)
            q = np.einsum("pkij,ki,kj->pk", Hp + Hm, dirs, dirs)
            out -= wk * w * (1.0 - r) * (q @ dw)
    return 0.5 * out


def _pv_once(cf, X, s, quad):
    c = cns(cf.n, s)
    feat = cf.feature_scale if math.isfinite(cf.feature_scale) else 1.0
    d = min(quad.split_point, feat / 2.0)
    near = _near_pv(cf, X, s, d, quad)
    far, bound = _far_radial(cf, X, s, d, quad)
    return c * (near + far), c * bound


def frac_laplacian_pv(f, s, quad: QuadratureSpec = DEFAULT_QUAD, grid=None, window=None, points=None,
                      n: int | None = None, schedule: bool = False) -> FracLapResult:
    r"""``c_{n,s} PV int (u(x) - u(y)) |x - y|^(-n-2s) dy`` by symmetrisation.

    With ``schedule=True`` the truncated values over ``quad.pv_epsilon_schedule``
    and their distance to the limit are returned in ``extra``.
    """
    order = as_order(s, "s")
    cf, X = _resolve(f, n, grid, window, points)
    if _is_constant(cf):
        z = np.zeros(X.shape[0])
        return FracLapResult(X, z, order, "pv", z.copy())
    v1, b1 = _pv_once(cf, X, order.value, quad)
    v2, b2 = _pv_once(cf, X, order.value, quad.refined())
    err = np.abs(v2 - v1) + b2
    _check(np.abs(v2 - v1), v2, quad)
    extra = {"truncation_bound": float(b2)}
    if schedule:
        eps = quad.pv_epsilon_schedule
        te = [truncated_ts_eps(cf, order.value, e, quad, points=X).values for e in eps]
        extra["epsilon"] = eps
        extra["T_eps"] = te
        extra["gap"] = [float(np.max(np.abs(t - v2))) for t in te]
    return FracLapResult(X, v2, order, "pv", err, extra)


def _tail_radius(cf: ClosedFormND, X: np.ndarray, a: float, quad: QuadratureSpec) -> tuple[float, bool]:
    reach = cf.reach(X)
    if np.all(np.isfinite(reach)):
        return float(np.max(reach)), True
    R = max(quad.tail_radius, 2.0 * a)
    if isinstance(cf, Separable):
        for f in cf.factors:
            R = max(R, f.min_tail_radius())
    return R, False


def truncated_family(f, s_list, eps_list, quad: QuadratureSpec = DEFAULT_QUAD, grid=None, window=None,
                     points=None, n: int | None = None):
    r"""``T_{s,eps} u`` for every pair of orders and truncation radii.

    The sphere means ``int_S u(x + rho theta)`` do not depend on ``s``, so
    they are computed once on a rule whose panels break at every ``eps``.
    Returns ``(points, values, bounds)`` with ``values`` of shape
    ``(len(s_list), len(eps_list), n_points)``.
    """
    orders = [as_order(v, "s").value for v in s_list]
    eps = [float(e) for e in eps_list]
    if not orders or not eps or min(eps) <= 0:
        raise ParameterOutOfRange("need orders and positive truncation radii")
    cf, X = _resolve(f, n, grid, window, points)
    P = X.shape[0]
    vals = np.zeros((len(orders), len(eps), P))
    bounds = np.zeros((len(orders), len(eps)))
    if _is_constant(cf):
        return X, vals, bounds
    nn = cf.n
    u0 = cf.value(X)
    area = sphere_area(nn)
    feature = cf.feature_scale if math.isfinite(cf.feature_scale) else 1.0
    R, compact = _tail_radius(cf, X, min(eps), quad)
    cuts = sorted(set(e for e in eps if e < R)) + [R]
    seg_rho, seg_w = [], []
    for a, b in zip(cuts, cuts[1:]):
        rho, w = _graded(a, b, quad.panel_dy, max(feature / 2.0, 1e-3), quad.n_tail)
        seg_rho.append(rho)
        seg_w.append(w)
    if seg_rho:
        S_all = _sphere_mean_block(cf, X, np.concatenate(seg_rho), quad.n_angles, feature)
        offs = np.cumsum([0] + [r.size for r in seg_rho])
    for i, s in enumerate(orders):
        c = cns(nn, s)
        tail = np.zeros(P)
        bound = 0.0
        if not compact:
            try:
                tail = cf.radial_tail(X, R, -1.0 - 2.0 * s)
            except DivergentTail:
                if any(isinstance(g, ExpGrowth) for g in getattr(cf, "factors", ())):
                    raise
                bound = cf.sup_abs * area * R ** (-2.0 * s) / (2.0 * s)
        # contribution of each segment, accumulated from the outside in
        parts = [S_all[:, offs[k]:offs[k + 1]] @ (seg_w[k] * seg_rho[k] ** (-1.0 - 2.0 * s))
                 for k in range(len(seg_rho))]
        outer = np.zeros(P)
        acc = {}
        for k in range(len(parts) - 1, -1, -1):
            outer = outer + parts[k]
            acc[cuts[k]] = outer.copy()
        for j, e in enumerate(eps):
            second = acc.get(e, np.zeros(P))
            vals[i, j] = c * (u0 * area * e ** (-2.0 * s) / (2.0 * s) - second - tail)
            bounds[i, j] = c * bound
    return X, vals, bounds


def truncated_ts_eps(f, s, eps: float, quad: QuadratureSpec = DEFAULT_QUAD, grid=None, window=None, points=None,
                     n: int | None = None) -> FracLapResult:
    r"""``T_eps u(x) = c_{n,s} int_{|x-y| > eps} (u(x) - u(y)) |x - y|^(-n-2s) dy`` (no symmetrisation)."""
    order = as_order(s, "s")
    if not eps > 0:
        raise ParameterOutOfRange(f"eps must be positive: {eps}")
    X, vals, bounds = truncated_family(f, [order.value], [eps], quad, grid, window, points, n)
    return FracLapResult(X, vals[0, 0], order, "truncated", np.full(X.shape[0], bounds[0, 0]), {"eps": eps})


# -- spectral oracle --------------------------------------------------------------------------------------


def spectral_fraclap(f, s) -> FracLapResult:
    """Multiply the discrete spectrum by ``|xi|^(2s)``; samples must cover whole periods on each axis."""
    order = as_order(s, "s")
    if isinstance(f, SampledFunction1D):
        grid = GridND((f.grid,))
        vals = np.asarray(f.values)[None, ...].reshape(grid.shape)
    elif isinstance(f, SampledFunctionND):
        grid, vals = f.grid, np.asarray(f.values)
    else:
        raise NonPeriodicInput("spectral_fraclap expects sampled data")
    scale = 1.0 + float(np.max(np.abs(vals)))
    core = vals
    for ax in range(grid.dim):
        first = np.take(core, 0, axis=ax)
        last = np.take(core, -1, axis=ax)
        if np.max(np.abs(first - last)) > 1e-10 * scale:
            raise NonPeriodicInput(f"axis {ax} does not span whole periods")
        core = np.take(core, np.arange(core.shape[ax] - 1), axis=ax)
    freqs = np.meshgrid(*[2.0 * math.pi * np.fft.fftfreq(a.n_points - 1, d=a.h) for a in grid.axes], indexing="ij")
    xi2 = sum(q * q for q in freqs)
    out = np.real(np.fft.ifftn(xi2**order.value * np.fft.fftn(core)))
    for ax in range(grid.dim):
        out = np.concatenate([out, np.take(out, [0], axis=ax)], axis=ax)
    return FracLapResult(grid.points(), out.ravel(), order, "spectral", np.zeros(out.size))


# -- limit sweep -----------------------------------------------------------------------------------------


def _window_grid(grid, X):
    axes = (grid,) if isinstance(grid, Grid1D) else grid.axes
    sub = []
    for k, a in enumerate(axes):
        vals = np.unique(X[:, k])
        sub.append(Grid1D(float(vals[0]), float(vals[-1]), vals.size))
    return GridND(tuple(sub))


def laplacian_limit_sweep(f, s_list, p: float, w, quad: QuadratureSpec = DEFAULT_QUAD, grid=None,
                          window=None, method: str = "pv", n: int | None = None) -> SweepReport:
    """Distances of ``(-Delta)^s u`` to ``-Delta u`` and to ``u`` in ``L^p(w)`` over the window.

    Columns: ``s, err_to_neg_laplacian, err_to_function, sup_to_neg_laplacian,
    sup_to_function, quad_error``.
    """
    from fraclab.funcspace.norms import weighted_lp_norm
    from fraclab.weights.types import lookup_weight

    ss = [as_order(x, "s").value for x in s_list]
    if not ss:
        raise ParameterOutOfRange("empty order list")
    if isinstance(f, (SampledFunction1D, SampledFunctionND)):
        grid = grid or f.grid
    cf, X = _resolve(f, n, grid, window, None)
    sub = _window_grid(grid, X)
    # X comes out in C order on the sub-grid
    wt = lookup_weight(w, cf.n) if isinstance(w, str) else w
    lap = cf.laplacian(X)
    u = cf.value(X)
    op = {"pv": frac_laplacian_pv, "semigroup": frac_laplacian_semigroup}[method]
    rows = []
    for s in ss:
        res = op(cf, s, quad, points=X)
        e1 = (res.values + lap).reshape(sub.shape)
        e0 = (res.values - u).reshape(sub.shape)
        n1 = weighted_lp_norm(SampledFunctionND(sub, e1, None, "bounded"), wt, p)
        n0 = weighted_lp_norm(SampledFunctionND(sub, e0, None, "bounded"), wt, p)
        rows.append((s, n1, n0, float(np.max(np.abs(e1))), float(np.max(np.abs(e0))), float(np.max(res.error))))
    meta = {"method": method, "dimension": cf.n, "points": int(X.shape[0]), "p": p,
            "weight": getattr(wt, "name", str(wt))}
    return SweepReport(("s", "err_to_neg_laplacian", "err_to_function", "sup_to_neg_laplacian",
                        "sup_to_function", "quad_error"), tuple(rows), meta)


# -- semigroup properties -------------------------------------------------------------------------------


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class PropertySuite:
    checks: tuple[PropertyCheck, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> PropertyCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _decreasing(seq) -> bool:
    return all(b <= a for a, b in zip(seq, seq[1:]))


def _ball_part(cf: ClosedFormND, X: np.ndarray, t: float, eps: float, n_angles: int) -> np.ndarray:
    """``int_{|y| < eps} W_t(y) u(x - y) dy``."""
    n = cf.n
    r, w = linear_rule([0.0], [eps], 4, 16)
    r, w = r[0], w[0]
    dirs, dw = sphere_rule(n, n_angles)
    Y = X[:, None, None, :] - r[None, :, None, None] * dirs[None, None, :, :]
    vals = cf.value(Y.reshape(-1, n)).reshape(X.shape[0], r.size, -1) @ dw
    ker = np.exp(-r * r / (4.0 * t)) / (4.0 * math.pi * t) ** (n / 2.0)
    return vals @ (w * r ** (n - 1) * ker)


def semigroup_property_suite(f, p: float = 2.0, w="one", quad: QuadratureSpec = DEFAULT_QUAD, grid=None,
                             n: int | None = None, t_lattice=None, tol: float = 1e-6) -> PropertySuite:
    r"""Numerical checks of the heat semigroup on the nodes of ``grid``.

    1. ``sup_t |e^{t Delta} u| <= M u`` (centred maximal function);
    2. heat equation residual ``|d/dt e^{t Delta}u - e^{t Delta} Delta u|``;
    3. ``||e^{t Delta} u||_{L^p(w)} <= C ||u||_{L^p(w)}`` (C is reported);
    4. ``e^{t Delta} u -> u`` pointwise and 5. in ``L^p(w)`` as ``t -> 0``;
    6. ``Delta e^{t Delta} u = e^{t Delta} Delta u``;
    7. the kernel mass on ``|y| < eps`` tends to zero in ``L^p(w)``.

    Derivatives in 2 and 6 are fourth-order central differences, so those
    residuals measure the consistency of the heat evaluation itself.
    """
    from fraclab.funcspace.norms import weighted_lp_norm
    from fraclab.maximal import geometric_scales, m_hl
    from fraclab.weights.types import lookup_weight

    if isinstance(f, (SampledFunction1D, SampledFunctionND)):
        grid = grid or f.grid
        n = f.dim if isinstance(f, SampledFunctionND) else 1
    n = n or (grid.dim if isinstance(grid, GridND) else 1)
    if grid is None:
        grid = Grid1D(-4.0, 4.0, 33) if n == 1 else GridND((Grid1D(-3.0, 3.0, 13),) * n)
    g = GridND((grid,)) if isinstance(grid, Grid1D) else grid
    cf = as_closed_form_nd(f, n)
    X = g.points()
    wt = lookup_weight(w, n) if isinstance(w, str) else w
    ts = np.asarray(t_lattice if t_lattice is not None else 10.0 ** np.arange(-3.0, 2.01, 0.5))

    def norm(v):
        return weighted_lp_norm(SampledFunctionND(g, np.asarray(v).reshape(g.shape)), wt, p)

    heat = {float(t): _heat_points(cf, X, float(t), 2) for t in ts}
    u = cf.value(X)
    checks = []

    # 1
    lhs = np.max(np.abs(np.array(list(heat.values()))), axis=0)
    radii = geometric_scales(1e-3, 64.0, per_octave=16)
    M = m_hl(cf, radii, points=X if n > 1 else X[:, 0], grid=grid).values
    excess = float(np.max(lhs - M))
    checks.append(PropertyCheck("maximal_domination", excess, tol, excess <= tol * (1.0 + float(np.max(M))),
                                {"sup_heat": float(np.max(lhs)), "sup_maximal": float(np.max(M))}))

    # 2 and 6 at a few moderate times
    probe = [0.1, 0.3, 1.0]
    res_t, res_x = [], []
    for t in probe:
        dt = 1e-2 * t
        ht = [_heat_points(cf, X, t + k * dt, 2) for k in (-2, -1, 1, 2)]
        dudt = (ht[0] - 8 * ht[1] + 8 * ht[2] - ht[3]) / (12 * dt)
        hl = _heat_points(cf, X, t, 2, laplacian=True)
        res_t.append(float(np.max(np.abs(dudt - hl))))
        dx = 1e-2
        lap_fd = np.zeros(X.shape[0])
        h0 = _heat_points(cf, X, t, 2)
        for k in range(n):
            e = np.zeros(n)
            e[k] = dx
            vals = [_heat_points(cf, X + j * e, t, 2) for j in (-2, -1, 1, 2)]
            lap_fd += (-vals[0] + 16 * vals[1] - 30 * h0 + 16 * vals[2] - vals[3]) / (12 * dx * dx)
        res_x.append(float(np.max(np.abs(lap_fd - hl))))
    checks.append(PropertyCheck("heat_equation", max(res_t), tol, max(res_t) <= tol, {"t": probe, "residual": res_t}))

    # 3
    base = norm(u)
    ratios = [norm(heat[float(t)]) / base for t in ts] if base > 0 else [0.0]
    C = float(max(ratios))
    checks.append(PropertyCheck("lp_bound", C, math.inf, math.isfinite(C), {"ratios": ratios}))

    # 4, 5
    small = [1e-1, 1e-2, 1e-3, 1e-4]
    hs = [_heat_points(cf, X, t, 2) for t in small]
    sup_err = [float(np.max(np.abs(h - u))) for h in hs]
    lp_err = [norm(h - u) for h in hs]
    for name, errs in (("pointwise_convergence", sup_err), ("lp_convergence", lp_err)):
        ok = _decreasing(errs) and errs[-1] <= 1e-2 * errs[0] + tol
        checks.append(PropertyCheck(name, errs[-1], 1e-2 * errs[0] + tol, ok, {"t": small, "error": errs}))

    checks.append(PropertyCheck("laplacian_commutes", max(res_x), tol, max(res_x) <= tol,
                                {"t": probe, "residual": res_x}))

    # 7
    eps = [1.0, 0.1, 0.01, 0.001]
    masses = [norm(_ball_part(cf, X, 1.0, e, quad.n_angles)) for e in eps]
    ok = _decreasing(masses) and masses[-1] <= 1e-2 * masses[0] + tol
    checks.append(PropertyCheck("small_ball_mass", masses[-1], 1e-2 * masses[0] + tol, ok,
                                {"eps": eps, "norm": masses}))
    return PropertySuite(tuple(checks), {"dimension": n, "points": int(X.shape[0]), "p": p,
                                         "weight": getattr(wt, "name", str(wt))})
