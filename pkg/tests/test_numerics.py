import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sharpwave.errors import AccuracyError, DomainError
from sharpwave.numerics import (
    beta_fn,
    exp_sinh_rule,
    gauss_jacobi,
    integrate_semiline,
    log_beta,
    log_gamma,
    mc_sphere,
    random_orthonormal_frame,
    sphere_area,
    sphere_integrate_zonal,
    tanh_sinh_rule,
)

exponent = st.floats(-0.95, 3.0)


def test_log_gamma_values():
    assert log_gamma(1.0) == 0.0
    assert math.isclose(log_gamma(0.5), 0.5 * math.log(math.pi), rel_tol=1e-15)
    assert math.isclose(log_gamma(10.0), math.log(362880.0), rel_tol=1e-15)
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_beta(1.0, -1.0)


@given(st.floats(0.05, 20), st.floats(0.05, 20))
def test_beta_symmetric_and_recurrence(x, y):
    assert math.isclose(beta_fn(x, y), beta_fn(y, x), rel_tol=1e-13)
    # B(x+1, y) = B(x, y) x / (x + y)
    assert math.isclose(beta_fn(x + 1, y), beta_fn(x, y) * x / (x + y), rel_tol=1e-12)


def test_sphere_area():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert sphere_area(4) == pytest.approx(2 * math.pi**2)
    with pytest.raises(DomainError):
        sphere_area(0)


@given(exponent, exponent)
def test_gauss_jacobi_mass(a, b):
    rule = gauss_jacobi(20, a, b)
    exact = 2 ** (a + b + 1) * beta_fn(a + 1, b + 1)
    assert math.isclose(rule.weights.sum(), exact, rel_tol=1e-12)


@given(exponent, exponent, st.integers(0, 19))
def test_gauss_jacobi_exact_on_polynomials(a, b, k):
    # int (1-t)^a (1+t)^b (1+t)^k = 2^{a+b+k+1} B(a+1, b+k+1)
    rule = gauss_jacobi(10, a, b)
    got = rule.integrate(lambda t: (1 + t) ** k)
    exact = 2 ** (a + b + k + 1) * beta_fn(a + 1, b + k + 1)
    assert math.isclose(got, exact, rel_tol=1e-11)


def test_gauss_jacobi_rejects_bad_exponents():
    with pytest.raises(DomainError):
        gauss_jacobi(8, -1.0, 0.0)
    with pytest.raises(DomainError):
        gauss_jacobi(0, 0.0, 0.0)


def test_gauss_jacobi_mapped():
    rule = gauss_jacobi(8, 0.0, 0.0).mapped(0.0, 2.0)
    assert rule.integrate(lambda x: x**3) == pytest.approx(4.0, rel=1e-14)


@given(st.floats(-0.9, 4.0), st.floats(0.2, 5.0))
def test_exp_sinh_gamma_integrals(s, rate):
    # int_0^inf r^s e^{-rate r} dr = Gamma(s+1) / rate^{s+1}
    rule = exp_sinh_rule(1 / 16, 1 / rate, max(0.0, -s))
    got = rule.integrate(lambda r: r**s * np.exp(-rate * r))
    assert math.isclose(got, math.gamma(s + 1) / rate ** (s + 1), rel_tol=1e-11)


def test_exp_sinh_rejects_nonintegrable():
    with pytest.raises(AccuracyError):
        exp_sinh_rule(sing_order=1.0)


def test_integrate_semiline_adaptive():
    got = integrate_semiline(lambda r: np.exp(-r) / np.sqrt(r), sing_order=0.5)
    assert got == pytest.approx(math.sqrt(math.pi), rel=1e-10)
    with pytest.raises(DomainError):
        integrate_semiline(lambda r: np.exp(-r), decay_hint=0.0)


def test_integrate_semiline_reports_slow_tails():
    with pytest.raises(AccuracyError):
        integrate_semiline(lambda r: 1.0 / (1.0 + r) ** 1.05, decay_hint=1.0)


@given(st.floats(-0.9, 2.0), st.floats(-0.9, 2.0))
def test_tanh_sinh_jacobi_weights(a, b):
    rule = tanh_sinh_rule(1 / 32, min(a, b))
    got = float(np.sum(rule.jacobi_weights(a, b)))
    assert math.isclose(got, 2 ** (a + b + 1) * beta_fn(a + 1, b + 1), rel_tol=1e-10)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 7])
def test_sphere_integrate_zonal_moments(d):
    area = sphere_area(d)
    assert sphere_integrate_zonal(d, lambda t: np.ones_like(t)) == pytest.approx(area, rel=1e-13)
    # average of (w . e)^2 over the sphere is 1/d
    assert sphere_integrate_zonal(d, lambda t: t * t) == pytest.approx(area / d, rel=1e-13)


def test_mc_sphere_reproducible_and_unit():
    a, b = mc_sphere(4, 1000, seed=3), mc_sphere(4, 1000, seed=3)
    assert np.array_equal(a, b)
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0)
    # second moments are isotropic up to sampling error
    assert np.allclose(a.T @ a / 1000, np.eye(4) / 4, atol=0.05)


def test_random_orthonormal_frame(rng):
    q = random_orthonormal_frame(5, rng)
    assert np.allclose(q @ q.T, np.eye(5), atol=1e-13)
