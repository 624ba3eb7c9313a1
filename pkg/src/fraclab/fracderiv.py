"""Marchaud one-sided fractional derivatives and the left Weyl fractional integral.

For ``v(tau) = u(t + sigma * tau)`` (``sigma = -1`` looks to the left,
``+1`` to the right) the derivative is

    D^alpha u(t) = 1/Gamma(-alpha) * int_0^inf (v(tau) - v(0)) tau^(-1-alpha) dtau.

The integral is split at ``c = quad.split_point``. Beyond ``c`` it is a
plain weighted integral of ``v`` minus ``v(0) c^-alpha / alpha``, closed
analytically past the truncation radius. On ``(0, c]`` two routes exist:

* ``taylor_subtract`` integrates by parts once,
  ``(1/alpha) [int_0^c v'(r) r^-alpha dr - c^-alpha (v(c) - v(0))]``, and
  takes the remaining weakly singular integral with Gauss-Jacobi nodes;
* ``log_substitute`` keeps the sampled difference ``v(tau) - v(0)`` and
  integrates it in ``y = log(tau)`` down to ``delta``, closing ``(0, delta)``
  with the second-order Taylor polynomial.

Both are refined by doubling every node budget; the change is the error
estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from fraclab.errors import DivergentTail, NonPeriodicInput, ParameterOutOfRange, QuadratureNotConverged
from fraclab.funcspace.catalog import SampledFunction1D, as_closed_form_1d, from_closed_form
from fraclab.funcspace.closed_form import ClosedForm1D, Constant
from fraclab.funcspace.grid import Grid1D
from fraclab.funcspace.norms import weighted_lp_norm
from fraclab.quadrature import DEFAULT_QUAD, QuadratureSpec, gauss_jacobi, gauss_legendre
from fraclab.report import SweepReport
from fraclab.special import FracOrder, as_order, gamma

#: inner cut-off of the log-substituted route
LOG_DELTA = 1e-8


@dataclass(frozen=True)
class FracDerivResult:
    """Values at the evaluation points with a per-point error estimate."""

    t: np.ndarray
    values: np.ndarray
    error: np.ndarray
    alpha: FracOrder
    variant: str
    tail_bound: float = 0.0
    extra: dict = field(default_factory=dict, compare=False)

    def to_csv(self) -> str:
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value", "error"])
        for t, v, e in zip(self.t, self.values, self.error):
            w.writerow([repr(float(t)), repr(float(v)), repr(float(e))])
        return buf.getvalue()


# -- rules -------------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _graded_rule(a: float, b: float, dy: float, max_width: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre panels on ``[a, b]`` (``a > 0``), widths ``min(a_k (e^dy - 1), max_width)``."""
    edges = [a]
    grow = math.exp(dy)
    while edges[-1] < b:
        e = edges[-1]
        edges.append(min(b, e + min(e * (grow - 1.0), max_width)))
        if len(edges) > 200_000:
            raise QuadratureNotConverged("far-field rule needs more than 200000 panels")
    e = np.asarray(edges)
    u, w = gauss_legendre(order)
    width = np.diff(e)
    x = (e[:-1, None] + width[:, None] * u[None, :]).ravel()
    wx = (width[:, None] * w[None, :]).ravel()
    return x, wx


def _window_points(f, grid, window, points) -> np.ndarray:
    if points is not None:
        return np.atleast_1d(np.asarray(points, dtype=float))
    if grid is None:
        raise ParameterOutOfRange("pass a sampled function, a grid or explicit points")
    if window is None:
        return grid.interior()
    return grid.points[grid.window_mask(*window)]


def _far_extent(cf: ClosedForm1D, t: np.ndarray, sigma: int, c: float, quad: QuadratureSpec):
    """Common truncation radius ``T`` and whether an analytic tail is needed."""
    lo, hi = cf.support
    if sigma < 0 and math.isfinite(lo):
        return max(c, float(np.max(t - lo))), False
    if sigma > 0 and math.isfinite(hi):
        return max(c, float(np.max(hi - t))), False
    return max(quad.tail_radius, cf.min_tail_radius(), 2 * c), True


def _far_part(cf, t, sigma, power, quad, c):
    """``int_c^inf v(tau) tau^power dtau`` with the truncated tail closed analytically."""
    T, needs_tail = _far_extent(cf, t, sigma, c, quad)
    out = np.zeros(t.shape)
    if T > c:
        scale = cf.feature_scale if math.isfinite(cf.feature_scale) else T
        x, w = _graded_rule(c, T, quad.panel_dy, max(scale, 1e-3), quad.n_tail)
        vals = cf.value(t[:, None] + sigma * x[None, :])
        out = vals @ (w * x**power)
    if needs_tail:
        out = out + cf.tail_power(t, T, power, sigma)
    return out


# -- derivative ------------------------------------------------------------------------------


def _near_taylor(cf, t, sigma, a, quad, c):
    """``int_0^c (v - v(0)) tau^(-1-a)`` by one integration by parts."""
    d = min(c, max(cf.feature_scale, 1e-6) / 2.0) if math.isfinite(cf.feature_scale) else c
    r, w = gauss_jacobi(quad.n_singular, -a)
    x = d * r
    acc = d ** (1.0 - a) * (sigma * cf.d1(t[:, None] + sigma * x[None, :]) @ w)
    if c > d:
        x2, w2 = _graded_rule(d, c, quad.panel_dy, max(cf.feature_scale, 1e-3), quad.n_tail)
        acc = acc + sigma * cf.d1(t[:, None] + sigma * x2[None, :]) @ (w2 * x2 ** (-a))
    v0 = cf.value(t)
    vc = cf.value(t + sigma * c)
    return (acc - c ** (-a) * (vc - v0)) / a


def _near_log(cf, t, sigma, a, quad, c):
    """``int_0^c (v - v(0)) tau^(-1-a)`` in ``y = log tau`` with a Taylor closure at 0."""
    delta = LOG_DELTA
    x, w = _graded_rule(delta, c, quad.panel_dy, max(cf.feature_scale, 1e-3) if math.isfinite(cf.feature_scale) else c, quad.n_tail)
    v0 = cf.value(t)
    diff = cf.value(t[:, None] + sigma * x[None, :]) - v0[:, None]
    acc = diff @ (w * x ** (-1.0 - a))
    try:
        d1 = sigma * cf.d1(t)
        d2 = cf.d2(t)
    except NotImplementedError:
        d1 = np.zeros_like(t)
        d2 = np.zeros_like(t)
    closure = d1 * delta ** (1.0 - a) / (1.0 - a) + 0.5 * d2 * delta ** (2.0 - a) / (2.0 - a)
    return acc + closure


def _marchaud_once(cf, t, a, sigma, quad):
    c = quad.split_point
    near = (_near_taylor if quad.substitution == "taylor_subtract" else _near_log)(cf, t, sigma, a, quad, c)
    far = _far_part(cf, t, sigma, -1.0 - a, quad, c) - cf.value(t) * c ** (-a) / a
    return (near + far) / gamma(-a)


def _with_refinement(fn, quad: QuadratureSpec, check: bool | None = None):
    coarse = fn(quad)
    fine = fn(quad.refined())
    err = np.abs(fine - coarse)
    check = quad.check_convergence if check is None else check
    if check and np.any(err > quad.tolerance * (1.0 + np.abs(fine))):
        worst = float(np.max(err / (1.0 + np.abs(fine))))
        raise QuadratureNotConverged(
            f"node doubling changed the value by {worst:.3g} (relative), above {quad.tolerance:g}"
        )
    return fine, err


def _marchaud(f, alpha, quad, grid, window, points, sigma, variant):
    order = as_order(alpha, "alpha")
    if isinstance(f, SampledFunction1D):
        grid = grid or f.grid
    cf = as_closed_form_1d(f)
    t = _window_points(cf, grid, window, points)
    if isinstance(cf, Constant):
        z = np.zeros(t.shape)
        return FracDerivResult(t, z, z.copy(), order, variant)
    vals, err = _with_refinement(lambda q: _marchaud_once(cf, t, order.value, sigma, q), quad)
    return FracDerivResult(t, vals, err, order, variant)


def marchaud_left(f, alpha, quad: QuadratureSpec = DEFAULT_QUAD, grid: Grid1D | None = None,
                  window=None, points=None) -> FracDerivResult:
    r"""``(D_left)^alpha u(t) = 1/Gamma(-alpha) int_{-inf}^t (u(tau) - u(t)) (t - tau)^(-1-alpha) dtau``.

    Evaluated at ``points``, or at the grid nodes of ``window`` (default:
    the central half of the grid). Raises :class:`QuadratureNotConverged`
    if doubling the node budgets moves a value by more than
    ``quad.tolerance`` (relative to ``1 + |value|``).
    """
    return _marchaud(f, alpha, quad, grid, window, points, -1, "left")


def marchaud_right(f, alpha, quad: QuadratureSpec = DEFAULT_QUAD, grid: Grid1D | None = None,
                   window=None, points=None) -> FracDerivResult:
    r"""``(D_right)^alpha u(t)``: the mirror image over ``(t, inf)``."""
    return _marchaud(f, alpha, quad, grid, window, points, +1, "right")


# -- Weyl integral ---------------------------------------------------------------------------


def _weyl_once(cf, t, a, quad):
    c = quad.split_point
    d = min(c, max(cf.feature_scale, 1e-6) / 2.0) if math.isfinite(cf.feature_scale) else c
    r, w = gauss_jacobi(quad.n_singular, a - 1.0)
    x = d * r
    near = d**a * (cf.value(t[:, None] - x[None, :]) @ w)
    if c > d:
        x2, w2 = _graded_rule(d, c, quad.panel_dy, max(cf.feature_scale, 1e-3), quad.n_tail)
        near = near + cf.value(t[:, None] - x2[None, :]) @ (w2 * x2 ** (a - 1.0))
    far = _far_part(cf, t, -1, a - 1.0, quad, c)
    return (near + far) / gamma(a)


def _check_weyl_tail(cf: ClosedForm1D) -> None:
    lo, _ = cf.support
    if math.isfinite(lo) or cf.decay_class in ("gaussian", "compact_support"):
        return
    if cf.decay_class == "exponential_left" and getattr(cf, "lam", 1.0) > 0:
        return
    if cf.period is not None:
        return
    raise DivergentTail(f"the Weyl integral of {type(cf).__name__} diverges at -inf")


def weyl_integral(f, alpha, quad: QuadratureSpec = DEFAULT_QUAD, grid: Grid1D | None = None,
                  window=None, points=None) -> FracDerivResult:
    r"""``(D_left)^(-alpha) u(t) = 1/Gamma(alpha) int_{-inf}^t u(tau) (t - tau)^(alpha - 1) dtau``."""
    order = as_order(alpha, "alpha")
    if isinstance(f, SampledFunction1D):
        grid = grid or f.grid
    cf = as_closed_form_1d(f)
    _check_weyl_tail(cf)
    t = _window_points(cf, grid, window, points)
    vals, err = _with_refinement(lambda q: _weyl_once(cf, t, order.value, q), quad)
    return FracDerivResult(t, vals, err, order, "weyl")


@dataclass(frozen=True)
class WeylForm(ClosedForm1D):
    """The Weyl integral of a closed form, itself usable as a closed form.

    Derivatives commute with the Weyl integral, so ``d1`` and ``d2`` are
    Weyl integrals of ``u'`` and ``u''``.
    """

    base: ClosedForm1D = field(default_factory=lambda: Constant(0.0))
    alpha: float = 0.5
    quad: QuadratureSpec = DEFAULT_QUAD

    def __post_init__(self) -> None:
        object.__setattr__(self, "decay_class", self.base.decay_class)

    def _eval(self, fn_cf, t):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        lo, _ = self.base.support
        out = np.zeros(flat.shape)
        live = flat > lo
        if np.any(live):
            out[live] = _weyl_once(fn_cf, flat[live], self.alpha, self.quad)
        return out.reshape(t.shape)

    def value(self, t):
        return self._eval(self.base, t)

    def d1(self, t):
        return self._eval(self.base.derivative(1), t)

    def d2(self, t):
        return self._eval(self.base.derivative(2), t)

    @property
    def support(self):
        lo, _ = self.base.support
        return (lo, math.inf)

    @property
    def feature_scale(self):
        return self.base.feature_scale


@dataclass(frozen=True)
class FTFCReport:
    alpha: float
    sup_distance: float
    l2_distance: float
    window: tuple[float, float]
    t: np.ndarray = field(repr=False)
    recovered: np.ndarray = field(repr=False)


def ftfc_compose(f, alpha, quad: QuadratureSpec = DEFAULT_QUAD, window=None, n_points: int = 41) -> FTFCReport:
    """Apply ``(D_left)^alpha`` to ``(D_left)^-alpha u`` and compare with ``u``.

    The default window is the central half of the support (or of
    ``[-6, 6]`` around the centre for non-compact data).
    """
    a = as_order(alpha, "alpha").value
    cf = as_closed_form_1d(f)
    if window is None:
        lo, hi = cf.support
        if cf.decay_class == "gaussian" or not (math.isfinite(lo) and math.isfinite(hi)):
            c = getattr(cf, "mu", 0.0)
            lo, hi = c - 6.0, c + 6.0
        mid, half = 0.5 * (lo + hi), 0.25 * (hi - lo)
        window = (mid - half, mid + half)
    t = np.linspace(window[0], window[1], n_points)
    g = WeylForm(cf, a, quad)
    back = _marchaud_once(g, t, a, -1, quad)
    diff = back - cf.value(t)
    l2 = math.sqrt(float(np.trapezoid(diff**2, t)))
    return FTFCReport(a, float(np.max(np.abs(diff))), l2, tuple(window), t, back)


# -- spectral oracle -------------------------------------------------------------------------


def _periodic_values(f: SampledFunction1D) -> np.ndarray:
    v = np.asarray(f.values, dtype=float)
    if abs(v[0] - v[-1]) > 1e-10 * (1.0 + np.max(np.abs(v))):
        raise NonPeriodicInput("first and last samples differ; the grid is not one period")
    return v[:-1]


def spectral_fracderiv(f: SampledFunction1D, alpha, side: str = "left") -> SampledFunction1D:
    """Multiply the discrete spectrum by ``(i xi)^alpha`` (principal branch).

    An oracle for trigonometric polynomials sampled over whole periods;
    ``side="right"`` uses ``(-i xi)^alpha``.
    """
    a = as_order(alpha, "alpha").value
    v = _periodic_values(f)
    n = v.size
    xi = 2.0 * math.pi * np.fft.fftfreq(n, d=f.grid.h)
    sgn = 1.0 if side == "left" else -1.0
    symbol = np.abs(xi) ** a * np.exp(1j * sgn * np.sign(xi) * a * math.pi / 2.0)
    out = np.real(np.fft.ifft(symbol * np.fft.fft(v)))
    return SampledFunction1D(f.grid, np.append(out, out[0]), None, "bounded")


# -- limit sweep ---------------------------------------------------------------------------------


def derivative_limit_sweep(f, alpha_list, p: float, w, quad: QuadratureSpec = DEFAULT_QUAD,
                           grid: Grid1D | None = None, window=None) -> SweepReport:
    """Distances of ``(D_left)^alpha u`` to ``u'`` and to ``u`` in ``L^p(w)`` over the window.

    Columns: ``alpha, err_to_derivative, err_to_function, sup_to_derivative,
    sup_to_function, quad_error``.
    """
    from fraclab.weights.types import lookup_weight

    alphas = [as_order(a, "alpha").value for a in alpha_list]
    if not alphas:
        raise ParameterOutOfRange("empty order list")
    if isinstance(f, SampledFunction1D):
        grid = grid or f.grid
    cf = as_closed_form_1d(f)
    if grid is None:
        grid = Grid1D(-6.0, 6.0, 241)
    t = _window_points(cf, grid, window, None)
    sub = Grid1D(float(t[0]), float(t[-1]), t.size)
    wt = lookup_weight(w) if isinstance(w, str) else w
    du = cf.d1(t)
    u = cf.value(t)
    rows = []
    for a in alphas:
        res = marchaud_left(cf, a, quad, points=t)
        e1 = res.values - du
        e0 = res.values - u
        n1 = weighted_lp_norm(SampledFunction1D(sub, e1, None, "bounded"), wt, p)
        n0 = weighted_lp_norm(SampledFunction1D(sub, e0, None, "bounded"), wt, p)
        rows.append((a, n1, n0, float(np.max(np.abs(e1))), float(np.max(np.abs(e0))), float(np.max(res.error))))
    meta = {"window": [float(t[0]), float(t[-1])], "points": int(t.size), "p": p,
            "weight": getattr(wt, "name", str(wt))}
    return SweepReport(("alpha", "err_to_derivative", "err_to_function", "sup_to_derivative",
                        "sup_to_function", "quad_error"), tuple(rows), meta)
