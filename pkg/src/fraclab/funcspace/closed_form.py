r"""Closed-form test functions with analytic derivatives.

Every evaluator is vectorised over numpy arrays. Besides ``value``, ``d1`` and
``d2`` a 1D closed form knows its (effective) support, its breakpoints
(points where it fails to be :math:`C^2`), a characteristic length used to
size quadrature panels, and how to integrate itself against a power on a
half-line,

.. math::

    \int_T^\infty u(t + \sigma\tau)\,\tau^p\,d\tau, \qquad \sigma = \pm 1,

which closes the far tails of the one-sided operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import exp1, gammaincc
from scipy.special import gamma as sp_gamma

from fraclab.errors import DivergentTail, ParameterOutOfRange

INF = math.inf
#: relative size below which an effective support cuts a decaying function
GAUSSIAN_CUT = 9.0

_DECAY_CLASSES = ("compact_support", "gaussian", "exponential_left", "bounded")


def _arr(t) -> np.ndarray:
    return np.asarray(t, dtype=float)


def upper_gamma(a: float, x: np.ndarray) -> np.ndarray:
    """Upper incomplete Gamma function for ``a > -1`` and ``x > 0``."""
    x = _arr(x)
    if a > 0:
        return gammaincc(a, x) * sp_gamma(a)
    if a == 0:
        return exp1(x)
    if a <= -1:
        raise ParameterOutOfRange(f"upper_gamma needs a > -1: {a}")
    return (gammaincc(a + 1.0, x) * sp_gamma(a + 1.0) - x**a * np.exp(-x)) / a


def oscillatory_power_tail(omega: float, T: np.ndarray, p: float, terms: int = 24) -> np.ndarray:
    r"""Asymptotic value of :math:`\int_T^\infty e^{i\omega\tau}\tau^p\,d\tau`.

    Repeated integration by parts; the truncation error is of relative size
    ``terms! / (omega T)**terms`` so callers keep ``|omega| T >= 60``.
    """
    T = _arr(T)
    iw = 1j * omega
    acc = np.zeros(T.shape, dtype=complex)
    coeff = 1.0
    for j in range(terms):
        acc += coeff * T ** (p - j) * (-1.0) ** j / iw ** (j + 1)
        coeff *= p - j
    return -np.exp(iw * T) * acc


@dataclass(frozen=True)
class ClosedForm1D:
    """Base class; subclasses override the evaluators they support."""

    decay_class: str = field(default="bounded", init=False)

    # --- evaluators ---------------------------------------------------
    def value(self, t) -> np.ndarray:
        raise NotImplementedError

    def d1(self, t) -> np.ndarray:
        raise NotImplementedError

    def d2(self, t) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t) -> np.ndarray:
        return self.value(t)

    def derivative(self, order: int = 1) -> ClosedForm1D:
        if order == 0:
            return self
        return DerivativeView(self, order)

    # --- geometry -----------------------------------------------------
    @property
    def support(self) -> tuple[float, float]:
        return (-INF, INF)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    @property
    def feature_scale(self) -> float:
        return 1.0

    @property
    def period(self) -> float | None:
        return None

    @property
    def smooth(self) -> bool:
        return not self.breakpoints

    @property
    def sup_abs(self) -> float:
        return 1.0

    def min_tail_radius(self) -> float:
        return 0.0

    # --- tails ----------------------------------------------------------
    def tail_power(self, t, T, p: float, sigma: int) -> np.ndarray:
        r""":math:`\int_T^\infty u(t + \sigma\tau)\tau^p d\tau` for arrays ``t``, ``T``."""
        t = _arr(t)
        T = np.broadcast_to(_arr(T), t.shape)
        lo, hi = self.support
        # the ray t + sigma*tau, tau > T, misses the support entirely
        misses = (t - T <= lo) if sigma < 0 else (t + T >= hi)
        if np.all(misses):
            return np.zeros(t.shape)
        raise DivergentTail(
            f"{type(self).__name__} has no analytic tail on the "
            f"{'left' if sigma < 0 else 'right'}"
        )


@dataclass(frozen=True)
class Gaussian(ClosedForm1D):
    """``amp * exp(-(t - mu)**2 / (2 sigma**2))``; value ``amp`` at the peak."""

    mu: float = 0.0
    sigma: float = 1.0
    amp: float = 1.0

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ParameterOutOfRange(f"sigma must be positive: {self.sigma}")
        object.__setattr__(self, "decay_class", "gaussian")

    def value(self, t):
        z = (_arr(t) - self.mu) / self.sigma
        return self.amp * np.exp(-0.5 * z * z)

    def d1(self, t):
        z = (_arr(t) - self.mu) / self.sigma
        return -self.amp * z / self.sigma * np.exp(-0.5 * z * z)

    def d2(self, t):
        z = (_arr(t) - self.mu) / self.sigma
        return self.amp * (z * z - 1.0) / self.sigma**2 * np.exp(-0.5 * z * z)

    @property
    def support(self):
        r = GAUSSIAN_CUT * self.sigma
        return (self.mu - r, self.mu + r)

    @property
    def feature_scale(self):
        return self.sigma

    @property
    def sup_abs(self):
        return abs(self.amp)

    @property
    def mass(self) -> float:
        return self.amp * self.sigma * math.sqrt(2.0 * math.pi)


def heat_kernel_1d(t0: float) -> Gaussian:
    """The 1D Gauss-Weierstrass kernel ``W_{t0}`` as a Gaussian."""
    if not t0 > 0:
        raise ParameterOutOfRange(f"heat kernel time must be positive: {t0}")
    return Gaussian(0.0, math.sqrt(2.0 * t0), 1.0 / math.sqrt(4.0 * math.pi * t0))


@dataclass(frozen=True)
class Bump(ClosedForm1D):
    """Standard bump ``exp(-1 / (1 - x**2))``, ``x = (t - center) / radius``."""

    center: float = 0.0
    radius: float = 1.0

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ParameterOutOfRange(f"radius must be positive: {self.radius}")
        object.__setattr__(self, "decay_class", "compact_support")

    def _parts(self, t):
        x = (_arr(t) - self.center) / self.radius
        inside = np.abs(x) < 1.0
        q = np.where(inside, 1.0 - x * x, 1.0)
        v = np.where(inside, np.exp(-1.0 / q), 0.0)
        return x, q, v, inside

    def value(self, t):
        return self._parts(t)[2]

    def d1(self, t):
        x, q, v, inside = self._parts(t)
        return np.where(inside, v * (-2.0 * x / q**2), 0.0) / self.radius

    def d2(self, t):
        x, q, v, inside = self._parts(t)
        dphi = -2.0 * x / q**2
        ddphi = -2.0 / q**2 - 8.0 * x * x / q**3
        return np.where(inside, v * (dphi**2 + ddphi), 0.0) / self.radius**2

    @property
    def support(self):
        return (self.center - self.radius, self.center + self.radius)

    @property
    def feature_scale(self):
        return self.radius / 4.0

    @property
    def sup_abs(self):
        return math.exp(-1.0)


@dataclass(frozen=True)
class ExpGrowth(ClosedForm1D):
    """``amp * exp(lam * t)``; decays towards -inf when ``lam > 0``."""

    lam: float = 1.0
    amp: float = 1.0

    def __post_init__(self) -> None:
        if self.lam == 0:
            raise ParameterOutOfRange("lam = 0 is the constant family")
        object.__setattr__(self, "decay_class", "exponential_left")

    def value(self, t):
        return self.amp * np.exp(self.lam * _arr(t))

    def d1(self, t):
        return self.lam * self.value(t)

    def d2(self, t):
        return self.lam**2 * self.value(t)

    def derivative(self, order: int = 1):
        return ExpGrowth(self.lam, self.amp * self.lam**order)

    @property
    def feature_scale(self):
        return 1.0 / abs(self.lam)

    @property
    def sup_abs(self):
        return INF

    def tail_power(self, t, T, p, sigma):
        t = _arr(t)
        mu = -sigma * self.lam
        if mu <= 0:
            raise DivergentTail(
                f"exp({self.lam} t) grows on the {'left' if sigma < 0 else 'right'}"
            )
        T = np.broadcast_to(_arr(T), t.shape)
        return self.value(t) * mu ** (-p - 1.0) * upper_gamma(p + 1.0, mu * T)


@dataclass(frozen=True)
class Cosine(ClosedForm1D):
    """``amp * cos(k t + phase)``."""

    k: float = 1.0
    amp: float = 1.0
    phase: float = 0.0

    def __post_init__(self) -> None:
        if not self.k > 0:
            raise ParameterOutOfRange(f"wavenumber must be positive: {self.k}")

    def value(self, t):
        return self.amp * np.cos(self.k * _arr(t) + self.phase)

    def d1(self, t):
        return -self.amp * self.k * np.sin(self.k * _arr(t) + self.phase)

    def d2(self, t):
        return -self.amp * self.k**2 * np.cos(self.k * _arr(t) + self.phase)

    def derivative(self, order: int = 1):
        return Cosine(self.k, self.amp * self.k**order, self.phase + order * math.pi / 2.0)

    @property
    def feature_scale(self):
        return 1.0 / self.k

    @property
    def period(self):
        return 2.0 * math.pi / self.k

    @property
    def sup_abs(self):
        return abs(self.amp)

    def min_tail_radius(self):
        return 60.0 / self.k

    def tail_power(self, t, T, p, sigma):
        t = _arr(t)
        T = np.broadcast_to(_arr(T), t.shape)
        # cos(k(t + sigma tau) + phase) = Re[e^{i(kt + phase)} e^{i sigma k tau}]
        tail = oscillatory_power_tail(sigma * self.k, T, p)
        return self.amp * np.real(np.exp(1j * (self.k * t + self.phase)) * tail)


@dataclass(frozen=True)
class Indicator(ClosedForm1D):
    """Indicator of the closed interval ``[a, b]``."""

    a: float = 0.0
    b: float = 1.0

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ParameterOutOfRange(f"need a < b: {self.a}, {self.b}")
        object.__setattr__(self, "decay_class", "compact_support")

    def value(self, t):
        t = _arr(t)
        return ((t >= self.a) & (t <= self.b)).astype(float)

    def d1(self, t):
        return np.zeros_like(_arr(t))

    def d2(self, t):
        return np.zeros_like(_arr(t))

    def derivative(self, order: int = 1):
        # zero almost everywhere
        return Constant(0.0)

    @property
    def support(self):
        return (self.a, self.b)

    @property
    def breakpoints(self):
        return (self.a, self.b)

    @property
    def feature_scale(self):
        return (self.b - self.a) / 4.0


@dataclass(frozen=True)
class Constant(ClosedForm1D):
    c: float = 1.0

    def value(self, t):
        return np.full(np.shape(t), float(self.c))

    def d1(self, t):
        return np.zeros(np.shape(t))

    def d2(self, t):
        return np.zeros(np.shape(t))

    def derivative(self, order: int = 1):
        return Constant(0.0)

    @property
    def support(self):
        if self.c == 0:
            return (0.0, 0.0)
        return (-INF, INF)

    @property
    def feature_scale(self):
        return INF

    @property
    def sup_abs(self):
        return abs(self.c)

    def tail_power(self, t, T, p, sigma):
        t = _arr(t)
        if self.c == 0:
            return np.zeros(t.shape)
        if p >= -1:
            raise DivergentTail(f"int_T^inf c tau^{p} d tau diverges")
        T = np.broadcast_to(_arr(T), t.shape)
        return self.c * T ** (p + 1.0) / (-p - 1.0)


@dataclass(frozen=True)
class DerivativeView(ClosedForm1D):
    """The ``order``-th derivative of a closed form, as a closed form."""

    base: ClosedForm1D = field(default_factory=lambda: Constant(0.0))
    order: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "decay_class", self.base.decay_class)

    def _get(self, k: int):
        names = {0: "value", 1: "d1", 2: "d2"}
        if k not in names:
            raise NotImplementedError(f"derivative of order {k} is not available")
        return getattr(self.base, names[k])

    def value(self, t):
        return self._get(self.order)(t)

    def d1(self, t):
        return self._get(self.order + 1)(t)

    def d2(self, t):
        return self._get(self.order + 2)(t)

    def derivative(self, order: int = 1):
        return DerivativeView(self.base, self.order + order)

    @property
    def support(self):
        return self.base.support

    @property
    def breakpoints(self):
        return self.base.breakpoints

    @property
    def feature_scale(self):
        return self.base.feature_scale

    @property
    def period(self):
        return self.base.period

    @property
    def sup_abs(self):
        return self.base.sup_abs / self.base.feature_scale**self.order * 2.0


@dataclass(frozen=True)
class Callable1D(ClosedForm1D):
    """Wraps plain callables; derivatives optional."""

    f: object = None
    df: object = None
    ddf: object = None
    support_: tuple[float, float] = (-INF, INF)
    scale: float = 1.0
    breaks: tuple[float, ...] = ()
    decay: str = "compact_support"

    def __post_init__(self) -> None:
        object.__setattr__(self, "decay_class", self.decay)

    def value(self, t):
        return np.asarray(self.f(_arr(t)), dtype=float)

    def d1(self, t):
        if self.df is None:
            raise NotImplementedError("no first derivative supplied")
        return np.asarray(self.df(_arr(t)), dtype=float)

    def d2(self, t):
        if self.ddf is None:
            raise NotImplementedError("no second derivative supplied")
        return np.asarray(self.ddf(_arr(t)), dtype=float)

    @property
    def support(self):
        return self.support_

    @property
    def breakpoints(self):
        return self.breaks

    @property
    def feature_scale(self):
        return self.scale
