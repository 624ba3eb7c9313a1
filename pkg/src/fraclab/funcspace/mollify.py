"""Mollification by a bump supported on [0, 1], which only looks to the left."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from fraclab.errors import EpsilonTooSmall, ParameterOutOfRange
from fraclab.funcspace.catalog import SampledFunction1D, as_closed_form_1d, from_closed_form
from fraclab.funcspace.closed_form import ClosedForm1D, Constant
from fraclab.quadrature import composite_unit


def psi(x) -> np.ndarray:
    """Unnormalised bump on [0, 1]: ``exp(-1 / (1 - (2x - 1)**2))``."""
    x = np.asarray(x, dtype=float)
    z = 2.0 * x - 1.0
    inside = np.abs(z) < 1.0
    q = np.where(inside, 1.0 - z * z, 1.0)
    return np.where(inside, np.exp(-1.0 / q), 0.0)


@lru_cache(maxsize=None)
def kernel_rule(panels: int = 16, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``x_j`` in (0, 1) and weights with ``sum w_j g(x_j) ~ int g psi``.

    The weights are normalised to sum to one, so constants are reproduced
    exactly.
    """
    x, w = composite_unit(panels, order)
    w = w * psi(x)
    return x, w / w.sum()


@dataclass(frozen=True)
class Mollified(ClosedForm1D):
    """``u * psi_eps(t) = int_0^1 u(t - eps x) psi(x) dx`` and its derivatives."""

    base: ClosedForm1D = field(default_factory=lambda: Constant(0.0))
    eps: float = 0.1

    def __post_init__(self) -> None:
        object.__setattr__(self, "decay_class", self.base.decay_class)

    def _apply(self, fn, t):
        t = np.asarray(t, dtype=float)
        x, w = kernel_rule()
        vals = fn(t[..., None] - self.eps * x)
        return vals @ w

    def value(self, t):
        return self._apply(self.base.value, t)

    def d1(self, t):
        return self._apply(self.base.d1, t)

    def d2(self, t):
        return self._apply(self.base.d2, t)

    @property
    def support(self):
        lo, hi = self.base.support
        return (lo, hi + self.eps)

    @property
    def feature_scale(self):
        return min(self.base.feature_scale, self.eps / 4.0)

    @property
    def sup_abs(self):
        return self.base.sup_abs


def mollify_one_sided(f: SampledFunction1D, eps: float) -> SampledFunction1D:
    """Convolve with ``psi_eps(t) = psi(t / eps) / eps``, ``psi`` on [0, 1] with unit mass.

    The result at ``t`` averages ``f`` over ``[t - eps, t]`` only.
    """
    if not (isinstance(eps, (int, float)) and math.isfinite(eps) and eps > 0):
        raise ParameterOutOfRange(f"eps must be positive: {eps}")
    if eps < f.grid.h:
        raise EpsilonTooSmall(f"eps = {eps} is below the grid spacing {f.grid.h}")
    cf = Mollified(as_closed_form_1d(f), float(eps))
    return from_closed_form(cf, f.grid)
