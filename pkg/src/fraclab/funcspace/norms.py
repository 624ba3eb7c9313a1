"""Weighted L^p norms and the two tail norms used for local integrability."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fraclab.errors import DivergentTail, GridMismatch, NonPositiveWeight, ParameterOutOfRange
from fraclab.funcspace.catalog import (
    SampledFunction1D,
    SampledFunctionND,
    as_closed_form_1d,
    as_closed_form_nd,
)
from fraclab.funcspace.closed_form import Constant, ExpGrowth
from fraclab.funcspace.closed_form_nd import Separable
from fraclab.funcspace.grid import Grid1D, GridND
from fraclab.quadrature import DEFAULT_QUAD, QuadratureSpec, linear_rule, log_rule, sphere_area, sphere_rule
from fraclab.special import as_order

# ln of the largest radius the log-spaced tail rule will reach
_MAX_LOG_RADIUS = 230.0


def hat_weights(points: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Weights integrating the piecewise-linear interpolant over ``[lo, hi]``.

    On whole cells this is the trapezoid rule; partial boundary cells are
    integrated exactly, which is the boundary correction for windows that
    do not fall on nodes.
    """
    x = np.asarray(points, dtype=float)
    if lo < x[0] - 1e-12 * (1 + abs(x[0])) or hi > x[-1] + 1e-12 * (1 + abs(x[-1])):
        raise GridMismatch(f"window [{lo}, {hi}] leaves the grid [{x[0]}, {x[-1]}]")
    lo, hi = max(lo, x[0]), min(hi, x[-1])
    w = np.zeros_like(x)
    if hi <= lo:
        return w
    left, right = x[:-1], x[1:]
    h = right - left
    a = np.clip(lo, left, right)
    b = np.clip(hi, left, right)
    # hat rising into the right node of each cell, falling from the left node
    w[1:] += ((b - left) ** 2 - (a - left) ** 2) / (2 * h)
    w[:-1] += ((right - a) ** 2 - (right - b) ** 2) / (2 * h)
    return w


def _weight_values(w, grid, shape) -> np.ndarray:
    if callable(w):
        if isinstance(grid, Grid1D):
            vals = w(grid.points)
        else:
            vals = np.asarray(w(grid.points())).reshape(grid.shape)
    else:
        vals = np.asarray(w, dtype=float)
    vals = np.broadcast_to(np.asarray(vals, dtype=float), shape) if np.ndim(vals) == 0 else vals
    if vals.shape != shape:
        raise GridMismatch(f"weight shape {vals.shape} does not match function shape {shape}")
    if np.any(~np.isfinite(vals)) or np.any(vals < 0) or not np.any(vals > 0):
        raise NonPositiveWeight("weight must be positive and finite on the grid")
    return vals


def weighted_lp_norm(f, w, p: float, window=None) -> float:
    """``(int |f|^p w)^(1/p)`` over a window of the grid.

    ``f`` is a sampled function; ``w`` a weight (callable) or an array on
    the same grid. ``window`` is ``(lo, hi)`` in 1D or a sequence of such
    pairs per axis; the default is the whole grid. A weight that vanishes
    at isolated nodes (``|t|**beta`` at 0) is accepted.
    """
    if not p >= 1:
        raise ParameterOutOfRange(f"p must be at least 1: {p}")
    if isinstance(f, SampledFunction1D):
        axes = (f.grid,)
        grid = f.grid
    elif isinstance(f, SampledFunctionND):
        axes = f.grid.axes
        grid = f.grid
    else:
        raise GridMismatch("weighted_lp_norm expects a sampled function")
    vals = np.asarray(f.values, dtype=float)
    wv = _weight_values(w, grid, vals.shape)
    if window is None:
        window = [(a.t_min, a.t_max) for a in axes]
    elif len(axes) == 1 and np.ndim(window) == 1:
        window = [tuple(window)]
    if len(window) != len(axes):
        raise GridMismatch("window dimension does not match the grid")
    integrand = np.abs(vals) ** p * wv
    # contract one axis at a time; the leading axis is always the next one
    for a, (lo, hi) in zip(axes, window):
        integrand = np.tensordot(hat_weights(a.points, lo, hi), integrand, axes=(0, 0))
    return float(integrand) ** (1.0 / p)


@dataclass(frozen=True)
class TailNorm:
    """A truncated tail-norm quadrature and a bound on what was truncated."""

    value: float
    tail_bound: float
    radius: float

    def __float__(self) -> float:
        return self.value


def _inverse_power_tail(R: float, a: float, q: float, terms: int = 60) -> float:
    r"""``int_R^inf rho^(q - 1 - a) / (1 + rho^q)`` ... specialised below.

    Computes ``int_R^inf rho^m / (1 + rho^q) d rho`` with ``m = q - 1 - a``
    (``a > 0``) through the convergent series in ``rho^-q`` for ``R > 1``.
    """
    out = 0.0
    for k in range(terms):
        e = a + k * q
        term = (-1) ** k * R ** (-e) / e
        out += term
        if abs(term) < 1e-18 * abs(out):
            break
    return out


def _radial_nodes(lo: float, R: float, breaks, scale: float, quad: QuadratureSpec):
    """Nodes/weights on ``[lo, R]``: Legendre panels below 1, log panels above."""
    nodes, weights = [], []
    cuts = sorted({lo, min(max(lo, 1.0), R), R} | {b for b in breaks if lo < b < R})
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            continue
        if a >= 1.0:
            r, w = log_rule([a], [b], quad.panel_dy, quad.n_tail)
        else:
            width = min(0.25, scale / 2)
            if a < min(width, b) / 2:
                # |rho|^q is not smooth at 0: halve panels towards it
                first = min(width, b)
                edges = first * 2.0 ** -np.arange(40.0, -1.0, -1.0)
                edges = np.concatenate(([a], edges[edges > a]))
                r, w = linear_rule(edges[:-1], edges[1:], 1, quad.n_tail)
                nodes.append(r.ravel())
                weights.append(w.ravel())
                a = first
                if b <= a:
                    continue
            panels = max(2, math.ceil((b - a) / width))
            r, w = linear_rule([a], [b], panels, quad.n_tail)
        nodes.append(r[0])
        weights.append(w[0])
    if not nodes:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(nodes), np.concatenate(weights)


def _pick_radius(level: float, a: float, floor: float) -> float:
    """Radius where ``level * R^-a / a`` drops below 1e-13 of ``level``."""
    if level == 0:
        return max(floor, 2.0)
    log_r = math.log(1e13 / a) / a
    return math.exp(min(max(log_r, math.log(max(floor, 2.0))), _MAX_LOG_RADIUS))


def tail_norm_A(f, alpha, A: float, quad: QuadratureSpec = DEFAULT_QUAD) -> TailNorm:
    r"""``int_{-inf}^A |u(tau)| / (1 + |tau|^(1 + alpha)) d tau``.

    The quadrature runs down to a radius ``R`` chosen from the decay of the
    kernel; beyond ``R`` the contribution is closed exactly for constants
    and zero past a compact support, otherwise bounded by
    ``sup|u| R^-alpha / alpha`` and reported in ``tail_bound``.
    """
    a = as_order(alpha, "alpha").value
    cf = as_closed_form_1d(f)
    if isinstance(cf, ExpGrowth) and cf.lam < 0:
        raise DivergentTail("exp growth towards -inf: the left tail norm diverges")
    q = 1.0 + a
    lo_sup, hi_sup = cf.support
    if lo_sup >= A or hi_sup <= lo_sup:
        return TailNorm(0.0, 0.0, abs(A))

    def g(tau):
        return np.abs(cf.value(tau)) / (1.0 + np.abs(tau) ** q)

    upper = min(A, hi_sup)
    sup = cf.sup_abs
    total = 0.0
    bound = 0.0
    breaks = set(cf.breakpoints) | {0.0}
    # negative side: tau = -rho, rho from max(0, -upper) outwards
    if lo_sup < 0:
        lo_rho = max(0.0, -upper)
        if math.isfinite(lo_sup):
            R = -lo_sup
            closed = 0.0
        else:
            R = max(_pick_radius(sup, a, lo_rho + 1.0), lo_rho + 1.0)
            if isinstance(cf, Constant):
                closed = abs(cf.c) * _inverse_power_tail(R, a, q)
            else:
                closed = 0.0
                bound = sup * R ** (-a) / a if math.isfinite(sup) else math.inf
        if R > lo_rho:
            r, w = _radial_nodes(lo_rho, R, {-b for b in breaks}, cf.feature_scale, quad)
            total += float(np.dot(w, g(-r)))
        total += closed
    # non-negative side: tau in [max(0, lo_sup), upper]
    if upper > 0:
        start = max(0.0, lo_sup)
        r, w = _radial_nodes(start, upper, breaks, cf.feature_scale, quad)
        total += float(np.dot(w, g(r)))
    R_used = R if lo_sup < 0 else abs(A)
    return TailNorm(total, bound, R_used)


def ls_tail_norm(f, s, quad: QuadratureSpec = DEFAULT_QUAD, n: int | None = None) -> TailNorm:
    r"""``int_{R^n} |u(x)| / (1 + |x|^(n + 2 s)) dx`` in polar coordinates."""
    if isinstance(f, SampledFunctionND):
        n = f.dim
    elif isinstance(f, SampledFunction1D):
        n = 1
    cf = as_closed_form_nd(f, n)
    n = cf.n
    sv = as_order(s, "s").value
    q = n + 2.0 * sv
    dirs, dw = sphere_rule(n, quad.n_angles)
    reach = float(cf.reach(np.zeros(n)))
    sup = cf.sup_abs
    constant = isinstance(cf, Separable) and cf.is_constant
    bound = 0.0
    closed = 0.0
    if math.isfinite(reach):
        R = reach
    else:
        R = _pick_radius(sup, 2.0 * sv, 2.0)
        if constant:
            c = float(np.prod([fac.c for fac in cf.factors]))
            closed = abs(c) * sphere_area(n) * _inverse_power_tail(R, 2.0 * sv, q)
        else:
            bound = sup * sphere_area(n) * R ** (-2.0 * sv) / (2.0 * sv)
    breaks = set()
    if n == 1 and isinstance(cf, Separable):
        breaks = {abs(b) for b in cf.factors[0].breakpoints}
    elif hasattr(cf, "profile"):
        c = np.asarray(cf.center, dtype=float)
        lo, hi = cf.profile.support
        rc = float(np.linalg.norm(c))
        rad = max(abs(lo), abs(hi))
        breaks = {x for x in (rad - rc, rad + rc, rc - rad) if x > 0}
    r, w = _radial_nodes(0.0, R, breaks, min(cf.feature_scale, 1.0), quad)
    radial = r ** (n - 1) / (1.0 + r**q)
    pts = r[:, None, None] * dirs[None, :, :]
    vals = np.abs(cf.value(pts.reshape(-1, n))).reshape(len(r), len(dw))
    total = float(np.einsum("i,i,ij,j->", w, radial, vals, dw)) + closed
    return TailNorm(total, bound, R)
