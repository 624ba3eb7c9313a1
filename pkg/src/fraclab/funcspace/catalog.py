"""The test-function catalog and sampled functions on grids."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline, RegularGridInterpolator

from fraclab.errors import GridMismatch, ParameterOutOfRange, UnknownFamily
from fraclab.funcspace.closed_form import (
    INF,
    Bump,
    Callable1D,
    ClosedForm1D,
    Constant,
    Cosine,
    ExpGrowth,
    Gaussian,
    Indicator,
    heat_kernel_1d,
)
from fraclab.funcspace.closed_form_nd import ClosedFormND, Radial, Separable, heat_kernel_nd
from fraclab.funcspace.grid import Grid1D, GridND

#: family -> (parameter names, defaults)
FAMILIES: dict[str, tuple[tuple[str, ...], tuple[float, ...]]] = {
    "gaussian": (("mu", "sigma"), (0.0, 1.0)),
    "bump": (("center", "radius"), (0.0, 1.0)),
    "exp_growth": (("lam",), (1.0,)),
    "cosine": (("k",), (1.0,)),
    "heat_kernel": (("t0",), (0.5,)),
    "indicator": (("a", "b"), (0.0, 1.0)),
    "constant": (("c",), (1.0,)),
}

_DECAY = {
    "gaussian": "gaussian",
    "heat_kernel": "gaussian",
    "bump": "compact_support",
    "indicator": "compact_support",
    "exp_growth": "exponential_left",
    "cosine": "bounded",
    "constant": "bounded",
}


@dataclass(frozen=True)
class CatalogEntry:
    """A named member of one of the closed-form families.

    Gaussians use the unnormalised convention ``exp(-(t - mu)^2 / (2 sigma^2))``
    (value 1 at the peak); ``heat_kernel`` is the normalised Gauss-Weierstrass
    kernel ``W_{t0}``.
    """

    name: str
    family: str
    parameters: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise UnknownFamily(f"unknown family {self.family!r}")
        names, defaults = FAMILIES[self.family]
        params = tuple(float(p) for p in self.parameters)
        if len(params) > len(names):
            raise ParameterOutOfRange(
                f"{self.family} takes at most {len(names)} parameters: {params}"
            )
        params = params + defaults[len(params):]
        object.__setattr__(self, "parameters", params)
        # validates ranges
        self.closed_form_1d()

    @property
    def decay_class(self) -> str:
        if self.family == "exp_growth" and self.parameters[0] < 0:
            return "bounded"
        return _DECAY[self.family]

    @property
    def params(self) -> dict[str, float]:
        return dict(zip(FAMILIES[self.family][0], self.parameters))

    def closed_form_1d(self) -> ClosedForm1D:
        p = self.parameters
        f = self.family
        if any(not math.isfinite(x) for x in p):
            raise ParameterOutOfRange(f"non-finite parameter in {p}")
        if f == "gaussian":
            return Gaussian(p[0], p[1])
        if f == "bump":
            return Bump(p[0], p[1])
        if f == "exp_growth":
            return ExpGrowth(p[0])
        if f == "cosine":
            return Cosine(p[0])
        if f == "heat_kernel":
            return heat_kernel_1d(p[0])
        if f == "indicator":
            return Indicator(p[0], p[1])
        return Constant(p[0])

    def closed_form_nd(self, n: int) -> ClosedFormND:
        if n == 1:
            cf = self.closed_form_1d()
            if self.family in ("bump", "indicator"):
                lo, hi = cf.support
                c = 0.5 * (lo + hi)
                prof = Bump(0.0, 0.5 * (hi - lo)) if self.family == "bump" else Indicator(
                    -0.5 * (hi - lo), 0.5 * (hi - lo)
                )
                return Radial(prof, 1, (c,))
            return Separable((cf,))
        p = self.parameters
        f = self.family
        if f == "gaussian":
            return Separable(
                (Gaussian(p[0], p[1]),) + tuple(Gaussian(0.0, p[1]) for _ in range(n - 1))
            )
        if f == "heat_kernel":
            return heat_kernel_nd(p[0], n)
        if f == "bump":
            return Radial(Bump(0.0, p[1]), n, (p[0],) + (0.0,) * (n - 1))
        if f == "indicator":
            c = 0.5 * (p[0] + p[1])
            return Radial(Indicator(-0.5 * (p[1] - p[0]), 0.5 * (p[1] - p[0])), n, (c,) + (0.0,) * (n - 1))
        one = Constant(1.0)
        if f == "exp_growth":
            return Separable((ExpGrowth(p[0]),) + (one,) * (n - 1))
        if f == "cosine":
            return Separable((Cosine(p[0]),) + (one,) * (n - 1))
        return Separable((Constant(p[0]),) + (one,) * (n - 1))


#: named catalog entries addressable from the CLI and config files
CATALOG: dict[str, CatalogEntry] = {
    e.name: e
    for e in (
        CatalogEntry("gaussian", "gaussian", (0.0, 1.0)),
        CatalogEntry("gaussian_narrow", "gaussian", (0.0, 0.5)),
        CatalogEntry("bump", "bump", (0.0, 1.0)),
        CatalogEntry("exp_growth", "exp_growth", (1.0,)),
        CatalogEntry("cosine", "cosine", (1.0,)),
        CatalogEntry("cosine3", "cosine", (3.0,)),
        CatalogEntry("heat_kernel", "heat_kernel", (0.5,)),
        CatalogEntry("indicator", "indicator", (0.0, 1.0)),
        CatalogEntry("constant", "constant", (1.0,)),
    )
}

_CALL = re.compile(r"^\s*([a-z_]+)\s*(?:\(([^)]*)\))?\s*$")


def lookup(spec: str | CatalogEntry) -> CatalogEntry:
    """Resolve ``"gaussian"``, ``"cosine3"`` or ``"cosine(2.5)"`` to an entry."""
    if isinstance(spec, CatalogEntry):
        return spec
    if spec in CATALOG:
        return CATALOG[spec]
    m = _CALL.match(spec)
    if not m or m.group(1) not in FAMILIES:
        raise UnknownFamily(f"unknown catalog function {spec!r}")
    args = m.group(2)
    params = tuple(float(a) for a in args.split(",")) if args and args.strip() else ()
    return CatalogEntry(spec.strip(), m.group(1), params)


def _spline_form(grid: Grid1D, values: np.ndarray, decay_class: str) -> ClosedForm1D:
    cs = CubicSpline(grid.points, values)
    lo, hi = grid.t_min, grid.t_max
    zero_out = decay_class in ("compact_support", "gaussian")

    def make(k):
        d = cs.derivative(k) if k else cs

        def f(t):
            t = np.asarray(t, dtype=float)
            inside = (t >= lo) & (t <= hi)
            out = d(np.clip(t, lo, hi))
            if zero_out:
                return np.where(inside, out, 0.0)
            if k:
                return np.where(inside, out, 0.0)
            return out

        return f

    support = (lo, hi) if zero_out else (-INF, INF)
    return Callable1D(make(0), make(1), make(2), support, 4.0 * grid.h, (), decay_class)


@dataclass(frozen=True)
class SampledFunction1D:
    grid: Grid1D
    values: np.ndarray
    closed_form: ClosedForm1D | None = None
    decay_class: str = "compact_support"
    entry: CatalogEntry | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_points,):
            raise GridMismatch(f"values shape {v.shape} does not match grid {self.grid.n_points}")
        if not np.all(np.isfinite(v)):
            raise ParameterOutOfRange("sampled values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.closed_form is not None:
            ref = self.closed_form.value(self.grid.points)
            if np.any(np.abs(v - ref) > 1e-12 * (1.0 + np.abs(v))):
                raise GridMismatch("values disagree with the attached closed form")

    @property
    def evaluator(self) -> ClosedForm1D:
        """The closed form, or a cubic spline through the samples."""
        if self.closed_form is not None:
            return self.closed_form
        return _spline_form(self.grid, self.values, self.decay_class)

    @property
    def t(self) -> np.ndarray:
        return self.grid.points

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value"])
        for t, v in zip(self.grid.points, self.values):
            w.writerow([repr(float(t)), repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, decay_class: str = "compact_support") -> SampledFunction1D:
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0][:2] != ["t", "value"]:
            raise GridMismatch("expected header t,value")
        data = np.array([[float(a) for a in r[:2]] for r in rows[1:]])
        grid = Grid1D(data[0, 0], data[-1, 0], len(data))
        if np.max(np.abs(grid.points - data[:, 0])) > 1e-9 * (1 + grid.span):
            raise GridMismatch("abscissae are not uniformly spaced")
        return cls(grid, data[:, 1], None, decay_class)


@dataclass(frozen=True)
class SampledFunctionND:
    grid: GridND
    values: np.ndarray
    closed_form: ClosedFormND | None = None
    decay_class: str = "compact_support"
    entry: CatalogEntry | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise GridMismatch(f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ParameterOutOfRange("sampled values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.closed_form is not None:
            ref = self.closed_form.value(self.grid.points()).reshape(self.grid.shape)
            if np.any(np.abs(v - ref) > 1e-12 * (1.0 + np.abs(v))):
                raise GridMismatch("values disagree with the attached closed form")

    @property
    def dim(self) -> int:
        return self.grid.dim

    @property
    def evaluator(self) -> ClosedFormND:
        if self.closed_form is not None:
            return self.closed_form
        return _InterpolatedND(self.grid, self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = ["t", "x2", "x3"][: self.dim]
        w.writerow(names + ["value"])
        for x, v in zip(self.grid.points(), self.values.ravel()):
            w.writerow([repr(float(c)) for c in x] + [repr(float(v))])
        return buf.getvalue()


class _InterpolatedND(ClosedFormND):
    def __init__(self, grid: GridND, values: np.ndarray) -> None:
        self.n = grid.dim
        self._grid = grid
        self._interp = RegularGridInterpolator(
            tuple(a.points for a in grid.axes), values, bounds_error=False, fill_value=0.0
        )

    def value(self, X):
        X = np.asarray(X, dtype=float)
        if self.n == 1 and (X.ndim == 0 or X.shape[-1] != 1):
            X = X[..., None]
        return self._interp(X)

    def support_box(self):
        return (
            np.array([a.t_min for a in self._grid.axes]),
            np.array([a.t_max for a in self._grid.axes]),
        )

    @property
    def smooth(self):
        return False

    @property
    def feature_scale(self):
        return float(np.min(self._grid.spacing)) * 4.0


def sample(entry: str | CatalogEntry, grid: Grid1D | GridND):
    """Sample a catalog entry on a grid, attaching its closed form."""
    entry = lookup(entry)
    if isinstance(grid, Grid1D):
        cf = entry.closed_form_1d()
        return SampledFunction1D(grid, cf.value(grid.points), cf, entry.decay_class, entry)
    if isinstance(grid, GridND):
        cf = entry.closed_form_nd(grid.dim)
        vals = cf.value(grid.points()).reshape(grid.shape)
        return SampledFunctionND(grid, vals, cf, entry.decay_class, entry)
    raise GridMismatch(f"not a grid: {grid!r}")


def from_closed_form(cf: ClosedForm1D | ClosedFormND, grid: Grid1D | GridND):
    """Sample an arbitrary closed form (not necessarily from the catalog)."""
    if isinstance(grid, Grid1D):
        return SampledFunction1D(grid, cf.value(grid.points), cf, cf.decay_class)
    vals = cf.value(grid.points()).reshape(grid.shape)
    return SampledFunctionND(grid, vals, cf, cf.decay_class)


def as_closed_form_1d(f) -> ClosedForm1D:
    if isinstance(f, SampledFunction1D):
        return f.evaluator
    if isinstance(f, ClosedForm1D):
        return f
    if isinstance(f, (str, CatalogEntry)):
        return lookup(f).closed_form_1d()
    raise GridMismatch(f"cannot interpret {type(f).__name__} as a 1D function")


def as_closed_form_nd(f, n: int | None = None) -> ClosedFormND:
    if isinstance(f, SampledFunctionND):
        return f.evaluator
    if isinstance(f, ClosedFormND):
        return f
    if isinstance(f, SampledFunction1D):
        return Separable((f.evaluator,))
    if isinstance(f, ClosedForm1D):
        return Separable((f,))
    if isinstance(f, (str, CatalogEntry)):
        return lookup(f).closed_form_nd(n or 1)
    raise GridMismatch(f"cannot interpret {type(f).__name__} as an n-D function")
