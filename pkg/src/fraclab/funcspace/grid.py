from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fraclab.errors import ParameterOutOfRange

#: default cap on the number of points of an n-dimensional grid
POINT_BUDGET = 4_000_000


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid ``t_min = t_0 < ... < t_{n-1} = t_max``."""

    t_min: float
    t_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not float(self.t_min) < float(self.t_max):
            raise ParameterOutOfRange(f"need t_min < t_max: {self.t_min}, {self.t_max}")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ParameterOutOfRange(f"need at least 2 points: {self.n_points}")
        object.__setattr__(self, "t_min", float(self.t_min))
        object.__setattr__(self, "t_max", float(self.t_max))
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def h(self) -> float:
        return (self.t_max - self.t_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n_points)

    @property
    def span(self) -> float:
        return self.t_max - self.t_min

    def refined(self, factor: int = 2) -> Grid1D:
        """Same interval with spacing divided by ``factor`` (old nodes kept)."""
        return Grid1D(self.t_min, self.t_max, factor * (self.n_points - 1) + 1)

    def interior_mask(self, fraction: float = 0.5) -> np.ndarray:
        """Nodes in the central ``fraction`` of the interval."""
        mid = 0.5 * (self.t_min + self.t_max)
        half = 0.5 * fraction * self.span
        t = self.points
        return (t >= mid - half - 1e-12 * self.span) & (t <= mid + half + 1e-12 * self.span)

    def interior(self, fraction: float = 0.5) -> np.ndarray:
        return self.points[self.interior_mask(fraction)]

    def window_mask(self, lo: float, hi: float) -> np.ndarray:
        t = self.points
        tol = 1e-9 * self.h
        return (t >= lo - tol) & (t <= hi + tol)


@dataclass(frozen=True)
class GridND:
    """Tensor product of uniform 1D grids, dimension 1 to 3."""

    axes: tuple[Grid1D, ...]
    budget: int = POINT_BUDGET

    def __post_init__(self) -> None:
        axes = tuple(self.axes)
        if not 1 <= len(axes) <= 3:
            raise ParameterOutOfRange(f"dimension must be 1, 2 or 3: {len(axes)}")
        if not all(isinstance(a, Grid1D) for a in axes):
            raise ParameterOutOfRange("axes must be Grid1D instances")
        object.__setattr__(self, "axes", axes)
        if self.size > self.budget:
            raise ParameterOutOfRange(
                f"grid has {self.size} points, above the budget {self.budget}"
            )

    @classmethod
    def cube(cls, lo: float, hi: float, n_points: int, dim: int) -> GridND:
        return cls(tuple(Grid1D(lo, hi, n_points) for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.n_points for a in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def spacing(self) -> np.ndarray:
        return np.array([a.h for a in self.axes])

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*(a.points for a in self.axes), indexing="ij")

    def points(self) -> np.ndarray:
        """All nodes as an array of shape ``(size, dim)`` in C order."""
        return np.stack([m.ravel() for m in self.mesh()], axis=1)

    def refined(self, factor: int = 2) -> GridND:
        return GridND(tuple(a.refined(factor) for a in self.axes), self.budget)

    def interior_mask(self, fraction: float = 0.5) -> np.ndarray:
        masks = [a.interior_mask(fraction) for a in self.axes]
        out = masks[0]
        for m in masks[1:]:
            out = np.multiply.outer(out, m)
        return out

    def interior_points(self, fraction: float = 0.5) -> np.ndarray:
        return self.points()[self.interior_mask(fraction).ravel()]
