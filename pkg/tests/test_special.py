import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclab.errors import OrderOutOfRange, PoleOrUnsupported
from fraclab.special import FracOrder, as_order, cns, gamma, gamma_array


def test_gamma_classical_values():
    assert gamma(1.0) == pytest.approx(1.0, rel=1e-14)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert gamma(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-13)
    assert gamma(5.0) == pytest.approx(24.0, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -1.5, float("nan"), float("inf")])
def test_gamma_rejects_poles_and_unsupported(x):
    with pytest.raises(PoleOrUnsupported):
        gamma(x)


@given(st.floats(min_value=-0.999, max_value=9.0).filter(lambda x: abs(x) > 1e-3))
def test_gamma_recurrence(x):
    lhs = gamma(x + 1.0)
    assert abs(lhs - x * gamma(x)) <= 1e-9 * abs(lhs)


@given(st.floats(min_value=0.05, max_value=30.0))
def test_gamma_matches_math_gamma(x):
    assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-12)


def test_gamma_array_shape():
    out = gamma_array(np.array([[1.0, 2.0], [3.0, 0.5]]))
    assert out.shape == (2, 2)
    np.testing.assert_allclose(out.ravel(), [1.0, 1.0, 2.0, math.sqrt(math.pi)], rtol=1e-13)


def test_cns_reference_values():
    assert cns(1, 0.5) == pytest.approx(1.0 / math.pi, rel=1e-13)
    assert cns(2, 0.5) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-13)


@given(st.integers(1, 3), st.floats(min_value=0.01, max_value=0.99))
def test_cns_composition(n, s):
    expected = 4.0**s * math.gamma(n / 2.0 + s) / math.pi ** (n / 2.0)
    assert cns(n, s) * abs(gamma(-s)) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2])
def test_cns_scales_like_s_one_minus_s(n):
    ratios = [cns(n, s) / (s * (1 - s)) for s in np.linspace(0.01, 0.99, 99)]
    assert all(math.isfinite(r) and r > 0 for r in ratios)
    # bounded above and below over the whole range
    assert max(ratios) / min(ratios) < 4.0


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5])
def test_order_range(bad):
    with pytest.raises(OrderOutOfRange):
        FracOrder(bad)
    with pytest.raises(OrderOutOfRange):
        cns(1, bad)


def test_frac_order_caches_constants():
    o = as_order(0.5, "s", 2)
    assert o.inv_gamma_neg == pytest.approx(1.0 / gamma(-0.5))
    assert o.cns == pytest.approx(cns(2, 0.5))
    assert as_order(o, "s", 2) is o
    assert as_order(o, "s", 1).cns == pytest.approx(cns(1, 0.5))
    assert float(o) == 0.5


@settings(max_examples=30)
@given(st.floats(min_value=1e-3, max_value=1 - 1e-3))
def test_inverse_gamma_is_negative(a):
    # Gamma is negative on (-1, 0)
    assert FracOrder(a).inv_gamma_neg < 0
