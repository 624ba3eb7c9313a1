"""Weight catalog: strictly positive, locally integrable functions."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from fraclab.errors import ParameterOutOfRange, UnknownFamily

FAMILIES_1D = {"exp_decay": ("lam",), "power": ("beta",), "constant": ("c",), "piecewise": ("left", "right", "at")}
FAMILIES_ND = {"constant": ("c",), "radial_power": ("beta",)}


@dataclass(frozen=True)
class Weight1D:
    """A weight on R.

    ``exp_decay(lam)`` is ``exp(-lam t)`` (``lam < 0`` gives growth),
    ``power(beta)`` is ``|t|**beta``, ``piecewise(left, right, at)`` takes
    the value ``left`` for ``t < at`` and ``right`` otherwise.
    """

    name: str
    family: str
    parameters: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.family not in FAMILIES_1D:
            raise UnknownFamily(f"unknown 1D weight family {self.family!r}")
        p = tuple(float(x) for x in self.parameters)
        defaults = {"exp_decay": (1.0,), "power": (0.5,), "constant": (1.0,), "piecewise": (1.0, 2.0, 0.0)}
        p = p + defaults[self.family][len(p):]
        object.__setattr__(self, "parameters", p)
        if self.family == "constant" and not p[0] > 0:
            raise ParameterOutOfRange("constant weight must be positive")
        if self.family == "piecewise" and not (p[0] > 0 and p[1] > 0):
            raise ParameterOutOfRange("piecewise weight values must be positive")

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        p = self.parameters
        if self.family == "exp_decay":
            return np.exp(-p[0] * t)
        if self.family == "power":
            with np.errstate(divide="ignore"):
                return np.abs(t) ** p[0]
        if self.family == "constant":
            return np.full(t.shape, p[0])
        return np.where(t < p[2], p[0], p[1])

    def log_value(self, t) -> np.ndarray:
        """``log w(t)``, finite where ``w`` would over- or underflow."""
        t = np.asarray(t, dtype=float)
        p = self.parameters
        if self.family == "exp_decay":
            return -p[0] * t
        if self.family == "power":
            with np.errstate(divide="ignore"):
                return p[0] * np.log(np.abs(t))
        if self.family == "constant":
            return np.full(t.shape, math.log(p[0]))
        return np.where(t < p[2], math.log(p[0]), math.log(p[1]))

    def power(self, q: float) -> Weight1D:
        """The weight raised to the power ``q`` (used for ``w**(1 - p')``)."""
        p = self.parameters
        if self.family == "exp_decay":
            return Weight1D(f"{self.name}^{q:g}", "exp_decay", (p[0] * q,))
        if self.family == "power":
            return Weight1D(f"{self.name}^{q:g}", "power", (p[0] * q,))
        if self.family == "constant":
            return Weight1D(f"{self.name}^{q:g}", "constant", (p[0] ** q,))
        return Weight1D(f"{self.name}^{q:g}", "piecewise", (p[0] ** q, p[1] ** q, p[2]))

    def scaled(self, c: float) -> ScaledWeight:
        return ScaledWeight(self, c)

    @property
    def singular_points(self) -> tuple[float, ...]:
        if self.family == "power":
            return (0.0,)
        if self.family == "piecewise":
            return (self.parameters[2],)
        return ()

    def to_nd(self) -> WeightND:
        return WeightND(self.name, "from_1d", (), 1, self)


@dataclass(frozen=True)
class ScaledWeight:
    base: Weight1D
    c: float

    def __call__(self, t):
        return self.c * self.base(t)

    def log_value(self, t):
        return math.log(self.c) + self.base.log_value(t)

    @property
    def family(self):
        return self.base.family

    @property
    def parameters(self):
        return self.base.parameters

    def power(self, q):
        return ScaledWeight(self.base.power(q), self.c**q)

    @property
    def name(self):
        return f"{self.c:g}*{self.base.name}"

    @property
    def singular_points(self):
        return self.base.singular_points


@dataclass(frozen=True)
class WeightND:
    """A weight on R^n: ``constant(c)`` or ``radial_power(beta)`` = ``|x|**beta``."""

    name: str
    family: str
    parameters: tuple[float, ...] = ()
    dim: int = 1
    base: Weight1D | None = None

    def __post_init__(self) -> None:
        if self.family == "from_1d":
            if self.base is None or self.dim != 1:
                raise ParameterOutOfRange("from_1d weights wrap a Weight1D in dimension 1")
            return
        if self.family not in FAMILIES_ND:
            raise UnknownFamily(f"unknown n-D weight family {self.family!r}")
        p = tuple(float(x) for x in self.parameters) or ((1.0,) if self.family == "constant" else (0.5,))
        object.__setattr__(self, "parameters", p)
        if not 1 <= self.dim <= 3:
            raise ParameterOutOfRange("dimension must be 1, 2 or 3")

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.dim == 1 and (X.ndim == 0 or X.shape[-1] != 1):
            X = X[..., None]
        if self.family == "from_1d":
            return self.base(X[..., 0])
        if self.family == "constant":
            return np.full(X.shape[:-1], self.parameters[0])
        r = np.sqrt(np.sum(X * X, axis=-1))
        with np.errstate(divide="ignore"):
            return r ** self.parameters[0]

    def log_value(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.dim == 1 and (X.ndim == 0 or X.shape[-1] != 1):
            X = X[..., None]
        if self.family == "from_1d":
            return self.base.log_value(X[..., 0])
        if self.family == "constant":
            return np.full(X.shape[:-1], math.log(self.parameters[0]))
        r = np.sqrt(np.sum(X * X, axis=-1))
        with np.errstate(divide="ignore"):
            return self.parameters[0] * np.log(r)

    @property
    def exponent(self) -> float | None:
        """The power ``beta`` for power-type weights, else None."""
        if self.family == "radial_power":
            return self.parameters[0]
        if self.family == "from_1d" and self.base.family == "power":
            return self.base.parameters[0]
        return None

    def power(self, q: float) -> WeightND:
        if self.family == "from_1d":
            return self.base.power(q).to_nd()
        if self.family == "constant":
            return WeightND(f"{self.name}^{q:g}", "constant", (self.parameters[0] ** q,), self.dim)
        return WeightND(f"{self.name}^{q:g}", "radial_power", (self.parameters[0] * q,), self.dim)

    def with_dim(self, n: int) -> WeightND:
        if self.family == "from_1d":
            if n != 1:
                raise ParameterOutOfRange("a 1D weight cannot be lifted to higher dimension")
            return self
        return WeightND(self.name, self.family, self.parameters, n)

    @property
    def singular_points(self) -> tuple[float, ...]:
        if self.family == "from_1d":
            return self.base.singular_points
        return (0.0,) if self.family == "radial_power" else ()


WEIGHTS_1D: dict[str, Weight1D] = {
    w.name: w
    for w in (
        Weight1D("one", "constant", (1.0,)),
        Weight1D("exp_decay", "exp_decay", (1.0,)),
        Weight1D("exp_growth", "exp_decay", (-1.0,)),
        Weight1D("power_half", "power", (0.5,)),
        Weight1D("power_neg2", "power", (-2.0,)),
        Weight1D("step", "piecewise", (2.0, 1.0, 0.0)),
    )
}

WEIGHTS_ND: dict[str, WeightND] = {
    w.name: w
    for w in (
        WeightND("one", "constant", (1.0,)),
        WeightND("radial_power_half", "radial_power", (0.5,)),
        WeightND("radial_power_neg2", "radial_power", (-2.0,)),
    )
}

_CALL = re.compile(r"^\s*([a-z_]+)\s*(?:\(([^)]*)\))?\s*$")


def lookup_weight(spec, dim: int | None = None):
    """Resolve a weight name or ``family(params)`` string.

    With ``dim`` given an n-D weight is returned; 1D catalog weights are
    wrapped when ``dim == 1``.
    """
    if isinstance(spec, (Weight1D, WeightND, ScaledWeight)):
        if dim is not None and isinstance(spec, Weight1D):
            return spec.to_nd() if dim == 1 else _fail(spec, dim)
        if dim is not None and isinstance(spec, WeightND):
            return spec.with_dim(dim)
        return spec
    if dim is not None and spec in WEIGHTS_ND:
        return WEIGHTS_ND[spec].with_dim(dim)
    if spec in WEIGHTS_1D:
        w = WEIGHTS_1D[spec]
        if dim is None:
            return w
        return w.to_nd() if dim == 1 else _fail(w, dim)
    m = _CALL.match(str(spec))
    if not m:
        raise UnknownFamily(f"unknown weight {spec!r}")
    fam = m.group(1)
    args = tuple(float(a) for a in m.group(2).split(",")) if m.group(2) else ()
    if fam in FAMILIES_ND and (dim is not None and (fam == "radial_power" or dim > 1)):
        return WeightND(spec, fam, args, dim)
    if fam in FAMILIES_1D:
        w = Weight1D(spec, fam, args)
        return w if dim is None else (w.to_nd() if dim == 1 else _fail(w, dim))
    if fam in FAMILIES_ND:
        return WeightND(spec, fam, args, dim or 1)
    raise UnknownFamily(f"unknown weight {spec!r}")


def _fail(w, dim):
    raise ParameterOutOfRange(f"weight {w.name!r} is one-dimensional, requested dim {dim}")


def dual_exponent(p: float) -> float:
    if not p > 1:
        raise ParameterOutOfRange(f"p must exceed 1: {p}")
    return p / (p - 1.0)


def is_finite_positive(values: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(values)) and np.all(values > 0) and not math.isnan(float(np.sum(values))))
