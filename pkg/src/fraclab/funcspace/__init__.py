"""Grids, closed-form and sampled functions, norms and the one-sided mollifier."""

from fraclab.funcspace.catalog import (
    CATALOG,
    FAMILIES,
    CatalogEntry,
    SampledFunction1D,
    SampledFunctionND,
    as_closed_form_1d,
    as_closed_form_nd,
    from_closed_form,
    lookup,
    sample,
)
from fraclab.funcspace.grid import Grid1D, GridND
from fraclab.funcspace.mollify import mollify_one_sided
from fraclab.funcspace.norms import TailNorm, ls_tail_norm, tail_norm_A, weighted_lp_norm

__all__ = [
    "CATALOG",
    "FAMILIES",
    "CatalogEntry",
    "Grid1D",
    "GridND",
    "SampledFunction1D",
    "SampledFunctionND",
    "TailNorm",
    "as_closed_form_1d",
    "as_closed_form_nd",
    "from_closed_form",
    "lookup",
    "ls_tail_norm",
    "mollify_one_sided",
    "sample",
    "tail_norm_A",
    "weighted_lp_norm",
]
