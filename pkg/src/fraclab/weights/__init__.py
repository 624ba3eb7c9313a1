"""Weight catalog and estimators for the Sawyer, Muckenhoupt and A_1^- conditions."""

from fraclab.weights.estimators import (
    DEFAULT_CAP,
    LatticeSpec,
    WeightEstimate,
    a1_minus_ratio,
    log_ball_integral,
    log_interval_integral,
    muckenhoupt_constant,
    muckenhoupt_rows,
    sawyer_minus_constant,
    sawyer_plus_constant,
    sawyer_rows,
)
from fraclab.weights.types import (
    WEIGHTS_1D,
    WEIGHTS_ND,
    ScaledWeight,
    Weight1D,
    WeightND,
    dual_exponent,
    lookup_weight,
)

__all__ = [
    "DEFAULT_CAP",
    "LatticeSpec",
    "ScaledWeight",
    "WEIGHTS_1D",
    "WEIGHTS_ND",
    "Weight1D",
    "WeightEstimate",
    "WeightND",
    "a1_minus_ratio",
    "dual_exponent",
    "log_ball_integral",
    "log_interval_integral",
    "lookup_weight",
    "muckenhoupt_constant",
    "muckenhoupt_rows",
    "sawyer_minus_constant",
    "sawyer_plus_constant",
    "sawyer_rows",
]
