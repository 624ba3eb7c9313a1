"""Tabular results of convergence sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from fraclab.errors import ParameterOutOfRange


@dataclass(frozen=True)
class SweepReport:
    """Rows sorted by their first column (the order or scale) plus metadata.

    Every row has one entry per column; numeric entries must be finite.
    """

    columns: tuple[str, ...]
    rows: tuple[tuple, ...] = ()
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        cols = tuple(str(c) for c in self.columns)
        if not cols:
            raise ParameterOutOfRange("a report needs at least one column")
        rows = tuple(tuple(r) for r in self.rows)
        for r in rows:
            if len(r) != len(cols):
                raise ParameterOutOfRange(f"row {r} does not match columns {cols}")
            for v in r:
                if isinstance(v, float) and not math.isfinite(v):
                    raise ParameterOutOfRange(f"non-finite value in row {r}")
        try:
            rows = tuple(sorted(rows, key=lambda r: r[0]))
        except TypeError:
            pass
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "metadata", dict(self.metadata))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def __len__(self) -> int:
        return len(self.rows)
