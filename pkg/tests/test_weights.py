import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclab.errors import IntegralOverflow, ParameterOutOfRange, UnknownFamily
from fraclab.funcspace import Grid1D
from fraclab.weights import (
    LatticeSpec,
    a1_minus_ratio,
    dual_exponent,
    log_interval_integral,
    lookup_weight,
    muckenhoupt_constant,
    muckenhoupt_rows,
    sawyer_minus_constant,
    sawyer_plus_constant,
    sawyer_rows,
)

LAT = LatticeSpec.dyadic()


def test_lattice_validation():
    with pytest.raises(ParameterOutOfRange):
        LatticeSpec((0.0,), (2.0, 1.0))
    with pytest.raises(ParameterOutOfRange):
        LatticeSpec((), (1.0,))
    assert LatticeSpec.dyadic(-2, 2).scales == (0.25, 0.5, 1.0, 2.0, 4.0)


def test_unknown_weight():
    with pytest.raises(UnknownFamily):
        lookup_weight("bogus")


def test_log_interval_integral_exp():
    w = lookup_weight("exp_decay")
    v = log_interval_integral(w, 1.0, 0.0, 1000.0)
    assert v == pytest.approx(math.log1p(-math.exp(-1000.0)), abs=1e-12)
    # exp(t) over [0, 1000] without overflow
    g = lookup_weight("exp_growth")
    assert log_interval_integral(g, 1.0, 0.0, 1000.0) == pytest.approx(1000.0 + math.log1p(-math.exp(-1000.0)), rel=1e-12)


def test_constant_weight_gives_one_everywhere():
    for est in (sawyer_minus_constant("one", 2.0, LAT), sawyer_plus_constant("one", 3.0, LAT),
                muckenhoupt_constant("one", 1.5, LAT)):
        assert est.value == pytest.approx(1.0, abs=1e-12)
        assert not est.cap_exceeded
    assert a1_minus_ratio("one", Grid1D(-2.0, 2.0, 21)).value == pytest.approx(1.0, abs=1e-12)


def test_exp_decay_in_sawyer_class():
    rows = sawyer_rows("exp_decay", 2.0, LAT)
    for a, h, v in rows:
        # the product is (1 - e^-h) / h independent of a
        assert v == pytest.approx(-math.expm1(-h) / h, rel=1e-9)
    assert sawyer_minus_constant("exp_decay", 2.0, LAT).value <= 1 + 1e-9


def test_exp_decay_not_muckenhoupt():
    rows = muckenhoupt_rows("exp_decay", 2.0, LAT)
    for a, h, v in rows:
        if h < 50:
            expected = math.sqrt(-math.expm1(-h) * math.expm1(h)) / h
            assert v == pytest.approx(expected, rel=1e-8)
    first = min(h for a, h, v in rows if v > 1e3)
    assert 16 <= first <= 32
    est = muckenhoupt_constant("exp_decay", 2.0, LAT)
    assert est.cap_exceeded and est.exceed_scale == 64.0
    with pytest.raises(IntegralOverflow):
        muckenhoupt_constant("exp_decay", 2.0, LAT, strict=True)


def test_reflection_plus_minus():
    m = sawyer_rows("exp_decay", 2.0, LAT, side="minus")
    p = sawyer_rows("exp_growth", 2.0, LAT.mirrored(), side="plus")
    pm = {(-a, h): v for a, h, v in p}
    for a, h, v in m:
        assert pm[(a, h)] == pytest.approx(v, rel=1e-10)


@pytest.mark.parametrize("name", ["exp_decay", "power_half", "step"])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_self_duality_per_cell(name, p):
    w = lookup_weight(name)
    pp = dual_exponent(p)
    lat = LatticeSpec.dyadic(-4, 4, np.linspace(-2.0, 2.0, 5))
    minus = sawyer_rows(w, p, lat, side="minus")
    plus = sawyer_rows(w.power(1.0 - pp), pp, lat, side="plus")
    for (a1, h1, v1), (a2, h2, v2) in zip(minus, plus):
        assert (a1, h1) == (a2, h2)
        assert v1 == pytest.approx(v2, rel=1e-10)


def test_power_weights_muckenhoupt():
    small = muckenhoupt_constant("power_half", 2.0, LatticeSpec.dyadic(-5, 5, [0.0, 0.5, -1.0]))
    big = muckenhoupt_constant("power_half", 2.0, LatticeSpec.dyadic(-10, 10, [0.0, 0.5, -1.0]))
    assert math.isfinite(big.value) and not big.cap_exceeded
    assert big.value >= small.value - 1e-12
    assert abs(big.value - small.value) < 0.05 * small.value
    bad = muckenhoupt_constant("power_neg2", 2.0, LatticeSpec.dyadic(-10, 0, [0.0]))
    assert bad.cap_exceeded


def test_radial_power_2d_is_finite():
    est = muckenhoupt_constant("radial_power_half", 2.0, LatticeSpec.dyadic(-3, 3, [0.0, 1.0]), dim=2)
    assert 1.0 <= est.value < 10.0


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e3))
def test_scale_invariance(c):
    lat = LatticeSpec.dyadic(-3, 3, [-1.0, 0.0, 1.0])
    w = lookup_weight("exp_decay")
    base = sawyer_minus_constant(w, 2.0, lat).value
    assert sawyer_minus_constant(w.scaled(c), 2.0, lat).value == pytest.approx(base, rel=1e-10)


def test_lattice_monotonicity():
    a = sawyer_minus_constant("power_half", 2.0, LatticeSpec.dyadic(-3, 3, [0.0, 1.0])).value
    b = sawyer_minus_constant("power_half", 2.0, LatticeSpec.dyadic(-5, 5, [-1.0, 0.0, 1.0])).value
    assert b >= a


def test_a1_minus_ratios():
    grid = Grid1D(-3.0, 3.0, 25)
    assert a1_minus_ratio("exp_decay", grid).value == pytest.approx(1.0, abs=1e-9)
    assert a1_minus_ratio("exp_growth", grid).cap_exceeded
