"""Lattice estimates of the Sawyer, Muckenhoupt and one-sided A_1 constants.

All interval integrals are accumulated in log space, so weights such as
``exp(+-t)`` on intervals of length 10^3 never overflow; a product that is
larger than the cap is reported with the scale where it first happened.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from fraclab.errors import IntegralOverflow, NonPositiveWeight, ParameterOutOfRange
from fraclab.quadrature import (
    DEFAULT_QUAD,
    QuadratureSpec,
    gauss_jacobi,
    gauss_legendre,
    log_rule,
    sphere_area,
    ball_volume,
)
from fraclab.weights.types import ScaledWeight, Weight1D, WeightND, dual_exponent, lookup_weight

LOG_FLOOR = math.log(1e-300)
DEFAULT_CAP = 1e12
_MAX_PANELS = 4096


@dataclass(frozen=True)
class LatticeSpec:
    """Centers ``a`` (1D) or ball centers (rows of an (m, n) array) and scales ``h``."""

    centers: tuple
    scales: tuple[float, ...]

    def __post_init__(self) -> None:
        c = np.asarray(self.centers, dtype=float)
        h = np.asarray(self.scales, dtype=float)
        if c.size == 0 or h.size == 0:
            raise ParameterOutOfRange("lattice must be non-empty")
        if np.any(h <= 0) or np.any(np.diff(h) <= 0):
            raise ParameterOutOfRange("scales must be positive and strictly increasing")
        cen = tuple(tuple(float(x) for x in row) for row in c) if c.ndim == 2 else tuple(float(x) for x in c.ravel())
        object.__setattr__(self, "centers", cen)
        object.__setattr__(self, "scales", tuple(float(x) for x in h))

    @classmethod
    def dyadic(cls, j_min: int = -10, j_max: int = 10, centers=None) -> LatticeSpec:
        if j_max < j_min:
            raise ParameterOutOfRange("need j_min <= j_max")
        if centers is None:
            centers = np.linspace(-8.0, 8.0, 17)
        return cls(tuple(np.asarray(centers, dtype=float)), tuple(2.0**j for j in range(j_min, j_max + 1)))

    def mirrored(self) -> LatticeSpec:
        c = np.asarray(self.centers, dtype=float)
        return LatticeSpec(tuple(-c[::-1]) if c.ndim == 1 else tuple(map(tuple, -c[::-1])), self.scales)

    def center_array(self, dim: int) -> np.ndarray:
        c = np.asarray(self.centers, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
            if dim > 1:
                c = np.hstack([c, np.zeros((len(c), dim - 1))])
        if c.shape[1] != dim:
            raise ParameterOutOfRange(f"ball centers have dimension {c.shape[1]}, expected {dim}")
        return c


@dataclass(frozen=True)
class WeightEstimate:
    """Maximum of a defining product over a finite lattice.

    A lattice maximum is a lower bound for the true constant. When a product
    exceeds ``cap`` the weight is reported as "not in the class at this
    cap", together with the first scale where that happened.
    """

    value: float
    argmax: tuple
    rows: tuple = field(repr=False)
    cap: float = DEFAULT_CAP
    exceed_scale: float | None = None
    floored: int = 0

    @property
    def cap_exceeded(self) -> bool:
        return self.exceed_scale is not None

    @property
    def status(self) -> str:
        if self.cap_exceeded:
            return f"cap exceeded at scale h={self.exceed_scale:g}"
        return "within cap"

    def __float__(self) -> float:
        return self.value


# -- one-dimensional interval integrals ---------------------------------------


def _power_exponent(w) -> float | None:
    if isinstance(w, (Weight1D, ScaledWeight)) and w.family == "power":
        return w.parameters[0]
    if isinstance(w, WeightND):
        return w.exponent
    return None


def _rate(w) -> float:
    """Scale over which log w changes by O(1)."""
    if isinstance(w, (Weight1D, ScaledWeight)) and w.family == "exp_decay":
        return 1.0 / max(abs(w.parameters[0]), 1e-12)
    if isinstance(w, WeightND) and w.family == "from_1d" and w.base.family == "exp_decay":
        return 1.0 / max(abs(w.base.parameters[0]), 1e-12)
    return math.inf


class _Counter:
    def __init__(self) -> None:
        self.floored = 0

    def clamp(self, logv: np.ndarray) -> np.ndarray:
        low = logv < LOG_FLOOR
        self.floored += int(np.count_nonzero(low))
        return np.where(low, LOG_FLOOR, logv)


def log_interval_integral(w, q: float, c: float, d: float, quad: QuadratureSpec = DEFAULT_QUAD,
                          counter: _Counter | None = None) -> float:
    """``log int_c^d w(t)**q dt`` (``+inf`` if the integral diverges)."""
    counter = counter or _Counter()
    if not d > c:
        return -math.inf
    logw = w.log_value

    def lw(x):
        return q * counter.clamp(logw(x))

    if isinstance(w, Weight1D) and w.family == "constant":
        return q * math.log(w.parameters[0]) + math.log(d - c)
    beta = _power_exponent(w)
    sing = [s for s in getattr(w, "singular_points", ()) if c - 1e-300 <= s <= d]
    cuts = sorted({c, d, *sing})
    parts = []
    for lo, hi in zip(cuts, cuts[1:]):
        if hi <= lo:
            continue
        if beta is not None:
            b = q * beta
            touch_lo = any(abs(lo - s) == 0 for s in sing)
            touch_hi = any(abs(hi - s) == 0 for s in sing)
            if touch_lo or touch_hi:
                if b <= -1:
                    return math.inf
                r, wj = gauss_jacobi(quad.n_singular, b)
                L = hi - lo
                x = lo + L * r if touch_lo else hi - L * r
                # weight w**q = const * |x|**b, so divide out the Jacobi factor
                dist = np.abs(x - (lo if touch_lo else hi))
                corr = lw(x) - b * np.log(dist)
                parts.append(logsumexp(corr, b=wj) + (b + 1.0) * math.log(L))
                continue
            # graded in the distance to the nearest singular point outside
            s0 = 0.0
            if lo > s0:
                r, wr = log_rule([lo - s0], [hi - s0], quad.panel_dy, quad.n_tail)
                x = s0 + r[0]
            else:
                r, wr = log_rule([s0 - hi], [s0 - lo], quad.panel_dy, quad.n_tail)
                x = s0 - r[0]
            parts.append(logsumexp(lw(x), b=wr[0]))
            continue
        width = min(hi - lo, 2.0 * _rate(w))
        panels = min(_MAX_PANELS, max(1, math.ceil((hi - lo) / width)))
        u, wu = gauss_legendre(quad.n_tail)
        edges = lo + (hi - lo) * np.arange(panels) / panels
        x = (edges[:, None] + (hi - lo) / panels * u[None, :]).ravel()
        wx = np.tile(wu * (hi - lo) / panels, panels)
        parts.append(logsumexp(lw(x), b=wx))
    return float(logsumexp(parts)) if parts else -math.inf


# -- n-dimensional ball integrals ----------------------------------------------


def _sphere_fraction(rho: np.ndarray, d: float, r: float, n: int) -> np.ndarray:
    """Fraction of the sphere ``|x| = rho`` lying inside the ball ``B(c, r)``, ``|c| = d``."""
    with np.errstate(divide="ignore", invalid="ignore"):
        cos_t = np.clip((rho**2 + d**2 - r**2) / (2.0 * rho * d), -1.0, 1.0)
    if n == 2:
        return np.arccos(cos_t) / math.pi
    return (1.0 - cos_t) / 2.0


def log_ball_integral(w: WeightND, q: float, center: np.ndarray, radius: float,
                      quad: QuadratureSpec = DEFAULT_QUAD, counter: _Counter | None = None) -> float:
    """``log int_{B(center, radius)} w**q``."""
    counter = counter or _Counter()
    n = w.dim
    if n == 1:
        c = float(center[0])
        return log_interval_integral(w, q, c - radius, c + radius, quad, counter)
    if w.family == "constant":
        return q * math.log(w.parameters[0]) + math.log(float(ball_volume(n, radius)))
    beta = q * w.parameters[0]
    d = float(np.linalg.norm(center))
    # radial_power: integrate rho^(n-1+beta) times the sphere fraction inside the ball
    e = n - 1 + beta
    parts = []
    inner = max(radius - d, 0.0)
    if inner > 0:
        if e <= -1:
            return math.inf
        parts.append(math.log(sphere_area(n)) + (e + 1.0) * math.log(inner) - math.log(e + 1.0))
    lo, hi = abs(radius - d), radius + d
    if d > 0 and hi > lo:
        if lo == 0 and e <= -1:
            return math.inf
        # rho = mid - half cos(theta) absorbs the square-root edges of the fraction
        u, wu = gauss_legendre(quad.n_singular)
        theta = math.pi * u
        rho = 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(theta)
        frac = _sphere_fraction(rho, d, radius, n)
        jac = 0.5 * (hi - lo) * np.sin(theta) * math.pi
        vals = counter.clamp(e * np.log(rho)) + np.log(np.maximum(sphere_area(n) * frac * jac, 1e-300))
        parts.append(logsumexp(vals, b=wu))
    return float(logsumexp(parts)) if parts else -math.inf


# -- the estimators -----------------------------------------------------------------


def _finish(rows, cap, strict, counter, what):
    vals = np.array([r[2] for r in rows])
    i = int(np.argmax(vals))
    exceed = None
    for a, h, v in sorted(rows, key=lambda r: (r[1], r[0])):
        if not v <= cap:
            exceed = h
            break
    est = WeightEstimate(float(vals[i]), rows[i][:2], tuple(rows), cap, exceed, counter.floored)
    if strict and exceed is not None:
        raise IntegralOverflow(f"{what} product exceeds {cap:g} at scale h={exceed:g}", exceed)
    return est


def _product(l1: float, l2: float, log_h: float, p: float, pp: float) -> float:
    lp = (l1 - log_h) / p + (l2 - log_h) / pp
    if math.isnan(lp):
        return math.inf
    return math.exp(lp) if lp < 709.0 else math.inf


def sawyer_rows(w, p: float, lat: LatticeSpec, quad: QuadratureSpec = DEFAULT_QUAD, side: str = "minus",
                counter: _Counter | None = None) -> list[tuple[float, float, float]]:
    """Per-(a, h) products for ``side`` in {minus, plus, two-sided}."""
    w = lookup_weight(w)
    pp = dual_exponent(p)
    counter = counter or _Counter()
    rows = []
    for a in np.asarray(lat.centers, dtype=float).ravel():
        for h in lat.scales:
            if side == "minus":
                l1 = log_interval_integral(w, 1.0, a, a + h, quad, counter)
                l2 = log_interval_integral(w, 1.0 - pp, a - h, a, quad, counter)
            elif side == "plus":
                l1 = log_interval_integral(w, 1.0, a - h, a, quad, counter)
                l2 = log_interval_integral(w, 1.0 - pp, a, a + h, quad, counter)
            elif side == "two-sided":
                l1 = log_interval_integral(w, 1.0, a, a + h, quad, counter)
                l2 = log_interval_integral(w, 1.0 - pp, a, a + h, quad, counter)
            else:
                raise ParameterOutOfRange(f"unknown side {side!r}")
            rows.append((float(a), float(h), _product(l1, l2, math.log(h), p, pp)))
    return rows


def sawyer_minus_constant(w, p: float, lat: LatticeSpec | None = None, quad: QuadratureSpec = DEFAULT_QUAD,
                          cap: float = DEFAULT_CAP, strict: bool = False) -> WeightEstimate:
    r"""Lattice maximum of ``(1/h int_a^{a+h} w)^(1/p) (1/h int_{a-h}^a w^(1-p'))^(1/p')``."""
    lat = lat or LatticeSpec.dyadic()
    counter = _Counter()
    return _finish(sawyer_rows(w, p, lat, quad, "minus", counter), cap, strict, counter, "A_p^-")


def sawyer_plus_constant(w, p: float, lat: LatticeSpec | None = None, quad: QuadratureSpec = DEFAULT_QUAD,
                         cap: float = DEFAULT_CAP, strict: bool = False) -> WeightEstimate:
    """Mirror image of :func:`sawyer_minus_constant`."""
    lat = lat or LatticeSpec.dyadic()
    counter = _Counter()
    return _finish(sawyer_rows(w, p, lat, quad, "plus", counter), cap, strict, counter, "A_p^+")


def muckenhoupt_rows(w, p: float, balls: LatticeSpec, quad: QuadratureSpec = DEFAULT_QUAD,
                     counter: _Counter | None = None, dim: int | None = None):
    """Per-ball products; a scale ``h`` is the ball diameter."""
    if isinstance(w, str):
        w = lookup_weight(w, dim or 1)
    elif isinstance(w, (Weight1D, ScaledWeight)):
        w = lookup_weight(w, 1) if isinstance(w, Weight1D) else w
    if isinstance(w, WeightND) and dim is not None:
        w = w.with_dim(dim)
    n = w.dim if isinstance(w, WeightND) else 1
    pp = dual_exponent(p)
    counter = counter or _Counter()
    rows = []
    for c in balls.center_array(n):
        for h in balls.scales:
            r = h / 2.0
            if isinstance(w, WeightND):
                l1 = log_ball_integral(w, 1.0, c, r, quad, counter)
                l2 = log_ball_integral(w, 1.0 - pp, c, r, quad, counter)
            else:
                l1 = log_interval_integral(w, 1.0, c[0] - r, c[0] + r, quad, counter)
                l2 = log_interval_integral(w, 1.0 - pp, c[0] - r, c[0] + r, quad, counter)
            log_vol = math.log(h) if n == 1 else math.log(float(ball_volume(n, r)))
            key = float(c[0]) if n == 1 else tuple(float(x) for x in c)
            rows.append((key, float(h), _product(l1, l2, log_vol, p, pp)))
    return rows


def muckenhoupt_constant(w, p: float, balls: LatticeSpec | None = None, quad: QuadratureSpec = DEFAULT_QUAD,
                         cap: float = DEFAULT_CAP, strict: bool = False, dim: int | None = None) -> WeightEstimate:
    r"""Lattice maximum of ``(|B|^-1 int_B w)^(1/p) (|B|^-1 int_B w^(1-p'))^(1/p')``."""
    balls = balls or LatticeSpec.dyadic()
    counter = _Counter()
    rows = muckenhoupt_rows(w, p, balls, quad, counter, dim)
    return _finish(rows, cap, strict, counter, "A_p")


def a1_minus_ratio(w, grid, lattice=None, cap: float = DEFAULT_CAP, strict: bool = False) -> WeightEstimate:
    """``max_t M^+ w(t) / w(t)`` over the interior of ``grid``.

    The forward averages come from :func:`fraclab.maximal.m_plus` applied to
    the weight itself, over the dyadic scales ``2^-10 .. 2^10`` unless a
    lattice is given.
    """
    from fraclab.funcspace.closed_form import Callable1D
    from fraclab.maximal import m_plus

    w = lookup_weight(w)
    if lattice is None:
        lattice = np.concatenate([[0.0], 2.0 ** np.arange(-10.0, 11.0)])
    cf = Callable1D(w, None, None, decay="bounded", breaks=tuple(getattr(w, "singular_points", ())))
    res = m_plus(cf, lattice, grid=grid)
    with np.errstate(divide="ignore"):
        ratio = res.values / w(res.t)
    rows = [(float(t), float(h), float(v)) for t, h, v in zip(res.t, res.argmax_scale, ratio)]
    rows = [(t, h, v if math.isfinite(v) else math.inf) for t, h, v in rows]
    counter = _Counter()
    est = _finish(rows, cap, False, counter, "A_1^-")
    if not est.cap_exceeded and res.overflow_scale is not None:
        est = WeightEstimate(est.value, est.argmax, est.rows, cap, res.overflow_scale, 0)
    if strict and est.cap_exceeded:
        raise IntegralOverflow(f"A_1^- ratio exceeds {cap:g}", est.exceed_scale)
    return est


def check_positive(w, points) -> None:
    vals = np.asarray(w(points), dtype=float)
    if np.any(~(vals > 0)):
        raise NonPositiveWeight(f"weight {getattr(w, 'name', w)!r} is not positive at all probed points")
