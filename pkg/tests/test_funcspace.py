import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclab.errors import (
    DivergentTail,
    EpsilonTooSmall,
    GridMismatch,
    NonPositiveWeight,
    ParameterOutOfRange,
    UnknownFamily,
)
from fraclab.funcspace import (
    CATALOG,
    Grid1D,
    GridND,
    SampledFunction1D,
    SampledFunctionND,
    as_closed_form_nd,
    lookup,
    ls_tail_norm,
    mollify_one_sided,
    sample,
    tail_norm_A,
    weighted_lp_norm,
)
from fraclab.weights import lookup_weight

UNIT = Grid1D(0.0, 1.0, 1001)


# -- grids and sampling ---------------------------------------------------------


def test_grid_validation():
    with pytest.raises(ParameterOutOfRange):
        Grid1D(1.0, 0.0, 10)
    with pytest.raises(ParameterOutOfRange):
        Grid1D(0.0, 1.0, 1)


def test_grid_nd_points_are_c_order():
    g = GridND((Grid1D(0.0, 1.0, 3), Grid1D(0.0, 2.0, 2)))
    assert g.shape == (3, 2)
    np.testing.assert_allclose(g.points()[:3], [[0.0, 0.0], [0.0, 2.0], [0.5, 0.0]])


def test_constant_entry_samples_exactly():
    f = sample("constant(5)", Grid1D(-1.0, 1.0, 11))
    np.testing.assert_array_equal(f.values, 5.0)


def test_gaussian_peak_and_cosine_value():
    g = lookup("gaussian").closed_form_1d()
    assert g.value(np.array([0.0]))[0] == 1.0
    c = lookup("cosine3").closed_form_1d()
    assert c.value(np.array([math.pi / 3]))[0] == pytest.approx(-1.0, abs=1e-15)


def test_unknown_family():
    with pytest.raises(UnknownFamily):
        lookup("sawtooth(1)")


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_sampled_values_match_closed_form(name):
    grid = Grid1D(-3.0, 3.0, 61)
    f = sample(name, grid)
    cf = lookup(name).closed_form_1d()
    np.testing.assert_allclose(f.values, cf.value(grid.points), rtol=1e-12, atol=0)
    assert f.decay_class == lookup(name).decay_class


def test_csv_round_trip():
    f = sample("gaussian", Grid1D(-2.0, 2.0, 9))
    g = SampledFunction1D.from_csv(f.to_csv(), f.decay_class)
    np.testing.assert_array_equal(g.values, f.values)
    assert g.grid == f.grid


@pytest.mark.parametrize("name", ["gaussian", "bump", "heat_kernel"])
def test_nd_closed_forms_are_consistent_with_1d(name):
    cf1 = lookup(name).closed_form_1d()
    cf2 = as_closed_form_nd(name, 2)
    x = np.array([[0.3, 0.0]])
    # the second factor is 1 on the axis for separable entries and radial entries agree on axis
    assert cf2.value(x)[0] == pytest.approx(cf1.value(np.array([0.3]))[0] * (cf2.value(np.array([[0.0, 0.0]]))[0] / cf1.value(np.array([0.0]))[0]), rel=1e-12)


# -- weighted norms -------------------------------------------------------------


def test_unit_norm_examples():
    one = sample("constant(1)", UNIT)
    assert weighted_lp_norm(one, lookup_weight("one"), 2) == pytest.approx(1.0, rel=1e-14)
    assert weighted_lp_norm(one, lookup_weight("exp_decay"), 1) == pytest.approx(1 - math.exp(-1), rel=1e-6)
    t = SampledFunction1D(UNIT, UNIT.points, None, "bounded")
    assert weighted_lp_norm(t, lookup_weight("one"), 2) == pytest.approx(math.sqrt(1 / 3), rel=1e-6)


def test_window_must_lie_on_grid():
    one = sample("constant(1)", UNIT)
    with pytest.raises(GridMismatch):
        weighted_lp_norm(one, lookup_weight("one"), 2, window=(-1.0, 0.5))


def test_partial_window_is_exact_for_linear_data():
    t = SampledFunction1D(UNIT, UNIT.points, None, "bounded")
    # |t| on [0.25, 0.7005] is linear between nodes so the hat rule is exact
    expected = (0.7005**2 - 0.25**2) / 2
    assert weighted_lp_norm(t, lookup_weight("one"), 1, window=(0.25, 0.7005)) == pytest.approx(expected, rel=1e-12)


def test_bad_weights_rejected():
    one = sample("constant(1)", UNIT)
    with pytest.raises(NonPositiveWeight):
        weighted_lp_norm(one, lambda t: -np.ones_like(t), 2)
    with pytest.raises(NonPositiveWeight):
        weighted_lp_norm(one, lambda t: np.zeros_like(t), 2)
    with pytest.raises(ParameterOutOfRange):
        weighted_lp_norm(one, lookup_weight("one"), 0.5)


def test_isolated_zero_of_power_weight_is_allowed():
    f = sample("gaussian", Grid1D(-1.0, 1.0, 201))
    assert weighted_lp_norm(f, lookup_weight("power_half"), 2) > 0


@settings(max_examples=30, deadline=None)
@given(st.one_of(st.just(0.0), st.floats(min_value=1e-3, max_value=50), st.floats(min_value=-50, max_value=-1e-3)), st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_norm_homogeneity(c, p):
    f = sample("gaussian", Grid1D(-3.0, 3.0, 61))
    cf = SampledFunction1D(f.grid, c * f.values, None, "gaussian")
    w = lookup_weight("exp_decay")
    assert weighted_lp_norm(cf, w, p) == pytest.approx(abs(c) * weighted_lp_norm(f, w, p), rel=1e-12, abs=1e-300)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(min_value=-5, max_value=5), min_size=21, max_size=21),
       st.lists(st.floats(min_value=0, max_value=5), min_size=21, max_size=21))
def test_norm_monotone(a, extra):
    grid = Grid1D(0.0, 2.0, 21)
    f = np.array(a)
    g = np.abs(f) + np.array(extra)
    w = lookup_weight("power_half")
    nf = weighted_lp_norm(SampledFunction1D(grid, f, None, "bounded"), w, 2)
    ng = weighted_lp_norm(SampledFunction1D(grid, g, None, "bounded"), w, 2)
    assert nf <= ng * (1 + 1e-12) + 1e-300


def test_nd_norm_of_constant_is_volume():
    g = GridND((Grid1D(0.0, 2.0, 5), Grid1D(0.0, 3.0, 7)))
    f = SampledFunctionND(g, np.ones(g.shape), None, "bounded")
    assert weighted_lp_norm(f, lookup_weight("one", 2), 1) == pytest.approx(6.0, rel=1e-14)


# -- tail norms -----------------------------------------------------------------


def test_tail_norm_of_zero():
    assert float(tail_norm_A("constant(0)", 0.3, 2.0)) == 0.0
    assert float(ls_tail_norm("constant(0)", 0.3, n=1)) == 0.0


def test_tail_norm_of_one_is_closed_form():
    # int_0^inf dx / (1 + x^q) = (pi / q) / sin(pi / q) with q = 1.5
    q = 1.5
    expected = (math.pi / q) / math.sin(math.pi / q)
    assert float(tail_norm_A("constant(1)", 0.5, 0.0)) == pytest.approx(expected, rel=1e-10)


def test_tail_norm_gaussian_reference():
    # adaptive quadrature of exp(-t^2/2) / (1 + |t|^1.25) over (-inf, 1]
    assert float(tail_norm_A("gaussian", 0.25, 1.0)) == pytest.approx(1.42447897959967, abs=1e-8)


@settings(max_examples=15, deadline=None)
@given(st.floats(min_value=-5, max_value=5), st.floats(min_value=0, max_value=3))
def test_tail_norm_monotone_in_A(A, dA):
    lo = float(tail_norm_A("gaussian", 0.5, A))
    hi = float(tail_norm_A("gaussian", 0.5, A + dA))
    assert lo <= hi + 1e-14


def test_tail_norm_diverges_for_growth_to_the_left():
    with pytest.raises(DivergentTail):
        tail_norm_A("exp_growth(-1)", 0.5, 0.0)


def test_ls_tail_norm_reference_values():
    assert float(ls_tail_norm("constant(1)", 0.5, n=1)) == pytest.approx(math.pi, rel=1e-9)
    # 2 pi int_0^inf r exp(-r^2/2) / (1 + r^2.6) dr by adaptive quadrature
    v = float(ls_tail_norm("gaussian", 0.3, n=2))
    assert v == pytest.approx(2.827672547401687, rel=1e-9)


def test_ls_tail_norm_stable_under_refinement():
    from fraclab.quadrature import DEFAULT_QUAD

    a = float(ls_tail_norm("gaussian", 0.3, DEFAULT_QUAD, n=2))
    b = float(ls_tail_norm("gaussian", 0.3, DEFAULT_QUAD.refined(), n=2))
    assert abs(a - b) <= 1e-6 * abs(a)


# -- mollifier --------------------------------------------------------------------


def test_mollifier_preserves_constants():
    f = sample("constant(3)", Grid1D(-1.0, 1.0, 41))
    for eps in (0.05, 0.5):
        np.testing.assert_allclose(mollify_one_sided(f, eps).values, 3.0, rtol=1e-13)


def test_mollified_indicator_inside_support():
    grid = Grid1D(-1.0, 2.0, 31)
    m = mollify_one_sided(sample("indicator", grid), 0.1)
    assert m.values[np.argmin(np.abs(grid.points - 0.5))] == pytest.approx(1.0, abs=1e-14)


def test_mollifier_converges_for_gaussian():
    grid = Grid1D(-4.0, 4.0, 801)
    f = sample("gaussian", grid)
    d1 = np.max(np.abs(mollify_one_sided(f, 0.1).values - f.values))
    d2 = np.max(np.abs(mollify_one_sided(f, 0.01).values - f.values))
    assert d2 < d1


def test_mollifier_commutes_with_derivative():
    grid = Grid1D(-4.0, 4.0, 81)
    f = sample("gaussian", grid)
    m = mollify_one_sided(f, 0.3)
    dm = m.closed_form.d1(grid.points)
    # derivative of the closed form, mollified
    dfm = mollify_one_sided(SampledFunction1D(grid, f.closed_form.d1(grid.points), f.closed_form.derivative(1), "gaussian"), 0.3)
    np.testing.assert_allclose(dm, dfm.values, atol=1e-12)


def test_mollifier_epsilon_checks():
    f = sample("gaussian", Grid1D(-1.0, 1.0, 11))
    with pytest.raises(EpsilonTooSmall):
        mollify_one_sided(f, 0.01)
    with pytest.raises(ParameterOutOfRange):
        mollify_one_sided(f, -1.0)
