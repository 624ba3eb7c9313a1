"""Closed-form functions on R^n: tensor products and radial profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fraclab.errors import DivergentTail, ParameterOutOfRange
from fraclab.funcspace.closed_form import INF, ClosedForm1D, Constant


def _pts(X, n: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if n == 1 and (X.ndim == 0 or X.shape[-1] != 1):
        X = X[..., None]
    if X.shape[-1] != n:
        raise ParameterOutOfRange(f"expected points with last axis {n}, got {X.shape}")
    return X


class ClosedFormND:
    """Interface for u, grad u, D^2 u and Laplacian on R^n."""

    n: int

    def value(self, X) -> np.ndarray:
        raise NotImplementedError

    def grad(self, X) -> np.ndarray:
        raise NotImplementedError

    def hess(self, X) -> np.ndarray:
        raise NotImplementedError

    def laplacian(self, X) -> np.ndarray:
        return np.trace(self.hess(X), axis1=-2, axis2=-1)

    def hess_norm(self, X) -> np.ndarray:
        """Frobenius norm of D^2 u, the pointwise size used by M(D^2 u)."""
        H = self.hess(X)
        return np.sqrt(np.sum(H * H, axis=(-2, -1)))

    def __call__(self, X) -> np.ndarray:
        return self.value(X)

    @property
    def decay_class(self) -> str:
        return "bounded"

    @property
    def smooth(self) -> bool:
        return True

    @property
    def feature_scale(self) -> float:
        return 1.0

    @property
    def sup_abs(self) -> float:
        return 1.0

    def support_box(self) -> tuple[np.ndarray, np.ndarray]:
        return np.full(self.n, -INF), np.full(self.n, INF)

    def reach(self, X) -> np.ndarray:
        """Distance from each point beyond which u vanishes (inf if never)."""
        lo, hi = self.support_box()
        X = _pts(X, self.n)
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            return np.full(X.shape[:-1], INF)
        far = np.maximum(np.abs(X - lo), np.abs(X - hi))
        return np.sqrt(np.sum(far * far, axis=-1))

    def radial_tail(self, X, R, p: float) -> np.ndarray:
        r"""``int_R^inf rho^p int_S u(x + rho theta) dtheta drho``; zero past the support."""
        X = _pts(X, self.n)
        R = np.broadcast_to(np.asarray(R, dtype=float), X.shape[:-1])
        if np.all(R >= self.reach(X)):
            return np.zeros(X.shape[:-1])
        raise DivergentTail(f"{type(self).__name__} has no analytic radial tail")


@dataclass(frozen=True)
class Separable(ClosedFormND):
    """``u(x) = prod_i f_i(x_i)``."""

    factors: tuple[ClosedForm1D, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.factors) <= 3:
            raise ParameterOutOfRange("1 to 3 factors supported")

    @property
    def n(self) -> int:
        return len(self.factors)

    def _vals(self, X, order: int):
        X = _pts(X, self.n)
        names = ("value", "d1", "d2")
        return [getattr(f, names[order])(X[..., i]) for i, f in enumerate(self.factors)]

    def value(self, X):
        out = None
        for v in self._vals(X, 0):
            out = v if out is None else out * v
        return out

    def grad(self, X):
        v0 = self._vals(X, 0)
        v1 = self._vals(X, 1)
        comps = []
        for i in range(self.n):
            g = v1[i]
            for j in range(self.n):
                if j != i:
                    g = g * v0[j]
            comps.append(g)
        return np.stack(comps, axis=-1)

    def hess(self, X):
        v0 = self._vals(X, 0)
        v1 = self._vals(X, 1)
        v2 = self._vals(X, 2)
        n = self.n
        H = np.empty(v0[0].shape + (n, n))
        for i in range(n):
            for j in range(n):
                acc = np.ones_like(v0[0])
                for k in range(n):
                    if i == j == k:
                        acc = acc * v2[k]
                    elif k in (i, j):
                        acc = acc * v1[k]
                    else:
                        acc = acc * v0[k]
                H[..., i, j] = acc
        return H

    def laplacian(self, X):
        v0 = self._vals(X, 0)
        v2 = self._vals(X, 2)
        out = np.zeros_like(v0[0])
        for i in range(self.n):
            term = v2[i]
            for j in range(self.n):
                if j != i:
                    term = term * v0[j]
            out = out + term
        return out

    @property
    def decay_class(self):
        classes = [f.decay_class for f in self.factors]
        for c in ("exponential_left", "bounded", "gaussian", "compact_support"):
            if c in classes:
                return c
        return classes[0]

    @property
    def smooth(self):
        return all(f.smooth for f in self.factors)

    @property
    def feature_scale(self):
        return min(f.feature_scale for f in self.factors)

    @property
    def sup_abs(self):
        return float(np.prod([f.sup_abs for f in self.factors]))

    def support_box(self):
        sup = [f.support for f in self.factors]
        return np.array([s[0] for s in sup]), np.array([s[1] for s in sup])

    @property
    def is_constant(self) -> bool:
        return all(isinstance(f, Constant) for f in self.factors)

    def radial_tail(self, X, R, p):
        X = _pts(X, self.n)
        R = np.broadcast_to(np.asarray(R, dtype=float), X.shape[:-1])
        if self.is_constant:
            c = float(np.prod([f.c for f in self.factors]))
            if c == 0:
                return np.zeros(R.shape)
            if p >= -1:
                raise DivergentTail("constant radial tail diverges")
            from fraclab.quadrature import sphere_area

            return c * sphere_area(self.n) * R ** (p + 1.0) / (-p - 1.0)
        if self.n == 1:
            f = self.factors[0]
            t = X[..., 0]
            return f.tail_power(t, R, p, +1) + f.tail_power(t, R, p, -1)
        return super().radial_tail(X, R, p)


@dataclass(frozen=True)
class Radial(ClosedFormND):
    """``u(x) = g(|x - center|)`` for an even 1D profile ``g``."""

    profile: ClosedForm1D
    dim: int
    center: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.dim <= 3:
            raise ParameterOutOfRange("dimension must be 1, 2 or 3")
        if self.center is None:
            object.__setattr__(self, "center", (0.0,) * self.dim)

    @property
    def n(self) -> int:
        return self.dim

    def _r(self, X):
        X = _pts(X, self.n) - np.asarray(self.center)
        r = np.sqrt(np.sum(X * X, axis=-1))
        return X, r

    def value(self, X):
        _, r = self._r(X)
        return self.profile.value(r)

    def grad(self, X):
        Y, r = self._r(X)
        safe = np.where(r > 0, r, 1.0)
        return (self.profile.d1(r) / safe)[..., None] * Y * (r > 0)[..., None]

    def hess(self, X):
        Y, r = self._r(X)
        g1 = self.profile.d1(r)
        g2 = self.profile.d2(r)
        small = r < 1e-7
        safe = np.where(small, 1.0, r)
        # g'(r)/r -> g''(0) as r -> 0 for an even profile
        g1r = np.where(small, g2, g1 / safe)
        e = Y / safe[..., None]
        eye = np.eye(self.n)
        outer = e[..., :, None] * e[..., None, :]
        outer = np.where(small[..., None, None], 0.0, outer)
        base = g1r[..., None, None] * eye
        return base + (g2 - g1r)[..., None, None] * outer

    @property
    def decay_class(self):
        return self.profile.decay_class

    @property
    def smooth(self):
        return self.profile.smooth

    @property
    def feature_scale(self):
        return self.profile.feature_scale

    @property
    def sup_abs(self):
        return self.profile.sup_abs

    def support_box(self):
        lo, hi = self.profile.support
        rad = max(abs(lo), abs(hi))
        c = np.asarray(self.center)
        return c - rad, c + rad

    def reach(self, X):
        lo, hi = self.profile.support
        rad = max(abs(lo), abs(hi))
        _, r = self._r(X)
        return r + rad


def ball_indicator_profile(radius: float) -> ClosedForm1D:
    from fraclab.funcspace.closed_form import Indicator

    return Indicator(-radius, radius)


def heat_kernel_nd(t0: float, n: int) -> Separable:
    from fraclab.funcspace.closed_form import heat_kernel_1d

    return Separable(tuple(heat_kernel_1d(t0) for _ in range(n)))


def mass(cf: ClosedFormND) -> float:
    """Integral of u over R^n for the decaying families (used in asymptotic tails)."""
    if isinstance(cf, Separable):
        out = 1.0
        for f in cf.factors:
            m = getattr(f, "mass", None)
            if m is None:
                return math.nan
            out *= m
        return out
    return math.nan
