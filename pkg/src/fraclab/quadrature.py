"""Quadrature rules and the discretisation settings shared by the operators.

All singular and improper integrals in fraclab are assembled from three
building blocks:

* Gauss-Jacobi rules on ``[0, b]`` that absorb an algebraic endpoint factor
  ``r**beta`` exactly,
* composite Gauss-Legendre panels, equally spaced in ``log(r)`` on
  ``[a, b]`` with ``a > 0`` (so panel width grows with distance from the
  singular point),
* sphere rules for the angular part of integrals over R^n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Literal

import numpy as np
from scipy.special import roots_jacobi, roots_legendre, roots_hermite

from fraclab.errors import ParameterOutOfRange


@dataclass(frozen=True)
class QuadratureSpec:
    """Every discretisation choice for singular and improper integrals.

    ``split_point`` separates the singular part ``(0, split_point]`` from the
    far part. ``n_singular`` is the Gauss-Jacobi node count on the singular
    part, ``n_tail`` the Gauss-Legendre order of each far-part panel and
    ``panel_dy`` the panel width in ``log(r)``. Beyond ``tail_radius`` the
    integral is closed analytically by the function family (or bounded).
    """

    split_point: float = 1.0
    n_singular: int = 24
    n_tail: int = 16
    panel_dy: float = 0.1
    tail_radius: float = 60.0
    pv_epsilon_schedule: tuple[float, ...] = (0.2, 0.1, 0.05, 0.025, 0.0125)
    substitution: Literal["taylor_subtract", "log_substitute"] = "taylor_subtract"
    tolerance: float = 1e-6
    n_angles: int = 32
    check_convergence: bool = True

    def __post_init__(self) -> None:
        if not self.split_point > 0:
            raise ParameterOutOfRange("split_point must be positive")
        if self.n_singular < 16 or self.n_tail < 16:
            raise ParameterOutOfRange("node counts must be at least 16")
        if not self.tail_radius > self.split_point:
            raise ParameterOutOfRange("tail_radius must exceed split_point")
        if not self.panel_dy > 0:
            raise ParameterOutOfRange("panel_dy must be positive")
        eps = tuple(float(e) for e in self.pv_epsilon_schedule)
        if not eps or any(e <= 0 for e in eps) or any(
            b >= a for a, b in zip(eps, eps[1:])
        ):
            raise ParameterOutOfRange(
                "pv_epsilon_schedule must be positive and strictly decreasing"
            )
        object.__setattr__(self, "pv_epsilon_schedule", eps)
        if self.substitution not in ("taylor_subtract", "log_substitute"):
            raise ParameterOutOfRange(f"unknown substitution {self.substitution!r}")
        if self.n_angles < 4 or self.n_angles % 2:
            raise ParameterOutOfRange("n_angles must be an even integer >= 4")

    def refined(self) -> QuadratureSpec:
        """The same spec with every node budget doubled."""
        return replace(
            self,
            n_singular=2 * self.n_singular,
            n_tail=self.n_tail,
            panel_dy=self.panel_dy / 2,
            n_angles=2 * self.n_angles,
        )


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=None)
def gauss_legendre(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = roots_legendre(m)
    return (x + 1.0) / 2.0, w / 2.0


@lru_cache(maxsize=None)
def _jacobi_unit(m: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_jacobi(m, 0.0, beta)
    # (1 + x)**beta on [-1, 1]  ->  r**beta on [0, 1]
    return (x + 1.0) / 2.0, w / 2.0 ** (beta + 1.0)


def gauss_jacobi(m: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights with ``sum(w * g(r)) ~ int_0^1 g(r) r**beta dr``."""
    if beta <= -1.0:
        raise ParameterOutOfRange(f"weight exponent must exceed -1: {beta}")
    return _jacobi_unit(int(m), round(float(beta), 15))


@lru_cache(maxsize=None)
def gauss_hermite(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights normalised so that ``sum(w) == 1`` for weight exp(-z^2)/sqrt(pi)."""
    z, w = roots_hermite(m)
    return z, w / math.sqrt(math.pi)


def composite_unit(n_panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [0, 1] with equal panels."""
    x, w = gauss_legendre(order)
    edges = np.arange(n_panels, dtype=float) / n_panels
    nodes = (edges[:, None] + x[None, :] / n_panels).ravel()
    weights = np.broadcast_to(w / n_panels, (n_panels, order)).ravel().copy()
    return nodes, weights


def log_rule(
    a: np.ndarray, b: np.ndarray, dy: float, order: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-row rules on ``[a_i, b_i]`` with panels uniform in ``log r``.

    ``a`` must be positive. Rows with ``b <= a`` get zero weights. Returns
    arrays of shape ``(len(a), n_nodes)``.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    live = b > a
    ratio = np.where(live, np.log(np.where(live, b, 1.0) / np.where(live, a, 1.0)), 0.0)
    ymax = float(ratio.max()) if ratio.size else 0.0
    n_panels = max(1, math.ceil(ymax / dy))
    u, w = composite_unit(n_panels, order)
    y = ratio[:, None] * u[None, :]
    r = a[:, None] * np.exp(y)
    wr = ratio[:, None] * w[None, :] * r
    return r, np.where(live[:, None], wr, 0.0)


def linear_rule(
    a: np.ndarray, b: np.ndarray, n_panels: int, order: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-row composite Gauss-Legendre rules on ``[a_i, b_i]`` (zero if empty)."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    u, w = composite_unit(max(1, int(n_panels)), order)
    length = np.clip(b - a, 0.0, None)
    return a[:, None] + length[:, None] * u[None, :], length[:, None] * w[None, :]


@lru_cache(maxsize=None)
def sphere_rule(n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Antipodally symmetric rule on the unit sphere S^{n-1}.

    Returns directions of shape ``(k, n)`` and weights summing to the sphere
    area (2 for n = 1, 2*pi for n = 2, 4*pi for n = 3).
    """
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if n == 2:
        th = 2.0 * np.pi * np.arange(m) / m
        return np.stack([np.cos(th), np.sin(th)], axis=1), np.full(m, 2.0 * np.pi / m)
    if n == 3:
        mu, wmu = roots_legendre(m)
        phi = 2.0 * np.pi * np.arange(2 * m) / (2 * m)
        MU, PHI = np.meshgrid(mu, phi, indexing="ij")
        st = np.sqrt(1.0 - MU**2)
        dirs = np.stack([st * np.cos(PHI), st * np.sin(PHI), MU], axis=-1).reshape(-1, 3)
        w = (wmu[:, None] * np.full(2 * m, np.pi / m)[None, :]).ravel()
        return dirs, w
    raise ParameterOutOfRange(f"dimension {n} not supported (n <= 3)")


def sphere_area(n: int) -> float:
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def ball_volume(n: int, r: float | np.ndarray = 1.0):
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0) * np.asarray(r) ** n


def trapezoid_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = h / 2.0
    return w
