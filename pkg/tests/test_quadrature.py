import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclab.errors import ParameterOutOfRange
from fraclab.quadrature import (
    DEFAULT_QUAD,
    QuadratureSpec,
    ball_volume,
    gauss_hermite,
    gauss_jacobi,
    gauss_legendre,
    linear_rule,
    log_rule,
    sphere_area,
    sphere_rule,
)


def test_legendre_integrates_polynomials():
    x, w = gauss_legendre(8)
    assert np.sum(w) == pytest.approx(1.0, abs=1e-15)
    assert np.dot(w, x**15) == pytest.approx(1.0 / 16.0, rel=1e-13)


@settings(max_examples=25)
@given(st.floats(min_value=-0.95, max_value=2.0), st.integers(0, 6))
def test_jacobi_moments(beta, k):
    x, w = gauss_jacobi(20, beta)
    assert np.dot(w, x**k) == pytest.approx(1.0 / (beta + k + 1.0), rel=1e-11)


def test_hermite_gaussian_moments():
    z, w = gauss_hermite(40)
    assert np.sum(w) == pytest.approx(1.0, rel=1e-14)
    # E[z^2] for the density exp(-z^2)/sqrt(pi)
    assert np.dot(w, z * z) == pytest.approx(0.5, rel=1e-13)


def test_log_and_linear_rules():
    r, w = log_rule([1.0], [100.0], 0.1, 16)
    assert np.dot(w[0], 1.0 / r[0]) == pytest.approx(math.log(100.0), rel=1e-13)
    r, w = linear_rule([0.0, 1.0], [1.0, 3.0], 4, 16)
    np.testing.assert_allclose(np.sum(w * r**2, axis=1), [1.0 / 3.0, 26.0 / 3.0], rtol=1e-13)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_rule_mass_and_symmetry(n):
    dirs, w = sphere_rule(n, 16)
    assert np.sum(w) == pytest.approx(sphere_area(n), rel=1e-13)
    np.testing.assert_allclose(np.linalg.norm(dirs, axis=1), 1.0, rtol=1e-14)
    # antipodal symmetry kills odd moments
    assert np.abs(w @ dirs).max() < 1e-13


def test_ball_volume():
    assert ball_volume(1, 2.0) == pytest.approx(4.0)
    assert ball_volume(2, 1.0) == pytest.approx(math.pi)
    assert ball_volume(3, 1.0) == pytest.approx(4.0 * math.pi / 3.0)


def test_spec_validation_and_refinement():
    with pytest.raises(ParameterOutOfRange):
        QuadratureSpec(pv_epsilon_schedule=(0.1, 0.2))
    with pytest.raises(ParameterOutOfRange):
        QuadratureSpec(n_singular=4)
    with pytest.raises(ParameterOutOfRange):
        QuadratureSpec(substitution="midpoint")
    fine = DEFAULT_QUAD.refined()
    assert fine.n_singular == 2 * DEFAULT_QUAD.n_singular
    assert fine.panel_dy == DEFAULT_QUAD.panel_dy / 2
