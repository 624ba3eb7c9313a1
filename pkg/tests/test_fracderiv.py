import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclab.errors import DivergentTail, NonPeriodicInput, OrderOutOfRange
from fraclab.fracderiv import (
    derivative_limit_sweep,
    ftfc_compose,
    marchaud_left,
    marchaud_right,
    spectral_fracderiv,
    weyl_integral,
)
from fraclab.funcspace import Grid1D, sample
from fraclab.quadrature import DEFAULT_QUAD

ZERO = np.array([0.0])


def _at(op, f, a, t=ZERO):
    return op(f, a, points=np.asarray(t, dtype=float)).values


def test_constants_are_annihilated():
    for a in (0.1, 0.5, 0.9):
        assert np.all(_at(marchaud_left, "constant(5)", a, [-1.0, 0.0, 2.0]) == 0)
        assert np.all(_at(marchaud_right, "constant(5)", a, [-1.0, 0.0, 2.0]) == 0)


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
def test_left_eigenfunctions(lam, a):
    v = _at(marchaud_left, f"exp_growth({lam})", a, [-1.0, 0.0, 0.5])
    np.testing.assert_allclose(v, lam**a * np.exp(lam * np.array([-1.0, 0.0, 0.5])), rtol=1e-6)


def test_exp2_half_order():
    assert _at(marchaud_left, "exp_growth(2)", 0.5)[0] == pytest.approx(math.sqrt(2), rel=1e-6)


def test_right_eigenfunction():
    assert _at(marchaud_right, "exp_growth(-1)", 0.5)[0] == pytest.approx(1.0, rel=1e-6)


def test_weyl_eigenfunctions_and_divergence():
    assert _at(weyl_integral, "exp_growth(1)", 0.5)[0] == pytest.approx(1.0, rel=1e-6)
    assert _at(weyl_integral, "exp_growth(2)", 0.5)[0] == pytest.approx(1 / math.sqrt(2), rel=1e-6)
    with pytest.raises(DivergentTail):
        weyl_integral("constant(1)", 0.5, points=ZERO)


def test_order_range_enforced():
    for a in (0.0, 1.0, -0.2):
        with pytest.raises(OrderOutOfRange):
            marchaud_left("gaussian", a, points=ZERO)


def test_gaussian_reference_values():
    # Fourier-integral oracle, adaptive quadrature
    assert _at(marchaud_left, "gaussian", 0.3, [0.7])[0] == pytest.approx(0.33881745526710966, abs=1e-10)
    assert _at(marchaud_right, "gaussian", 0.3, [0.7])[0] == pytest.approx(0.7748822276588953, abs=1e-10)
    assert _at(weyl_integral, "gaussian", 0.5, [0.5])[0] == pytest.approx(1.417363563090666, abs=1e-10)


def test_reflection():
    t = np.array([-0.8, 0.1, 1.3])
    left = _at(marchaud_left, "gaussian(0.4,1)", 0.6, -t)
    right = _at(marchaud_right, "gaussian(-0.4,1)", 0.6, t)
    np.testing.assert_allclose(right, left, rtol=1e-9, atol=1e-12)


@settings(max_examples=8, deadline=None)
@given(st.floats(min_value=-2, max_value=2), st.floats(min_value=0.1, max_value=0.9))
def test_translation_covariance(c, a):
    t = np.array([-0.5, 0.5])
    shifted = _at(marchaud_left, f"gaussian({c!r},1)", a, t)
    base = _at(marchaud_left, "gaussian", a, t - c)
    np.testing.assert_allclose(shifted, base, rtol=1e-8, atol=1e-10)


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_scaling(lam):
    a = 0.4
    t = np.array([-0.3, 0.2, 0.9])
    scaled = _at(marchaud_left, f"gaussian(0,{1 / lam!r})", a, t)
    base = _at(marchaud_left, "gaussian", a, lam * t)
    np.testing.assert_allclose(scaled, lam**a * base, rtol=1e-8, atol=1e-10)


def test_linearity_through_sampled_data():
    grid = Grid1D(-6.0, 6.0, 241)
    f = sample("gaussian", grid)
    g = sample("bump", grid)
    from fraclab.funcspace import SampledFunction1D

    h = SampledFunction1D(grid, 2.0 * f.values - 3.0 * g.values, None, "gaussian")
    pts = np.array([-0.5, 0.25])
    lhs = marchaud_left(h, 0.5, points=pts).values
    rhs = 2.0 * marchaud_left("gaussian", 0.5, points=pts).values - 3.0 * marchaud_left("bump", 0.5, points=pts).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-4)


def test_spectral_oracle():
    grid = Grid1D(0.0, 2 * math.pi, 257)
    out = spectral_fracderiv(sample("cosine3", grid), 0.5)
    np.testing.assert_allclose(out.values, 3**0.5 * np.cos(3 * grid.points + math.pi / 4), atol=1e-12)
    assert spectral_fracderiv(sample("cosine", grid), 0.5).values[0] == pytest.approx(math.cos(math.pi / 4), abs=1e-13)
    np.testing.assert_allclose(spectral_fracderiv(sample("constant(4)", grid), 0.3).values, 0.0, atol=1e-13)
    with pytest.raises(NonPeriodicInput):
        spectral_fracderiv(sample("gaussian", Grid1D(0.0, 3.0, 33)), 0.5)


def test_marchaud_matches_spectral_on_cosine():
    grid = Grid1D(0.0, 2 * math.pi, 257)
    sd = spectral_fracderiv(sample("cosine3", grid), 0.7)
    pts = grid.points[32:225:32]
    md = marchaud_left("cosine3", 0.7, points=pts).values
    np.testing.assert_allclose(md, sd.values[32:225:32], atol=1e-5)


@pytest.mark.parametrize("a", [0.5, 0.75])
def test_ftfc_bump(a):
    rep = ftfc_compose("bump", a)
    assert rep.window == (-0.5, 0.5)
    assert rep.sup_distance <= 1e-4


def test_ftfc_gaussian_refinement():
    e1 = ftfc_compose("gaussian_narrow", 0.25, DEFAULT_QUAD, n_points=11).sup_distance
    e2 = ftfc_compose("gaussian_narrow", 0.25, DEFAULT_QUAD.refined(), n_points=11).sup_distance
    assert e2 <= max(e1, 1e-12)


def test_limit_sweep_monotone():
    grid = Grid1D(-6.0, 6.0, 121)
    up = derivative_limit_sweep("gaussian", [0.9, 0.99, 0.999], 2, "exp_decay", grid=grid)
    e = {r[0]: r[1] for r in up.rows}
    assert e[0.9] > e[0.99] > e[0.999]
    down = derivative_limit_sweep("gaussian", [0.1, 0.01], 2, "exp_decay", grid=grid)
    e = {r[0]: r[2] for r in down.rows}
    assert e[0.1] > e[0.01]
    zero = derivative_limit_sweep("constant(0)", [0.5], 2, "one", grid=grid)
    assert zero.rows[0][1:5] == (0.0, 0.0, 0.0, 0.0)
