import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sharpwave import constants as K
from sharpwave.errors import DomainError, UnsupportedDataError
from sharpwave.functionals import (
    H_lambda,
    H_lambda_mc,
    I_beta,
    LHSQuadrature,
    SignMode,
    SphericalFunction,
    T_beta,
    lhs_norm_sq,
    lp_sphere_norm,
    zonal_pair_integral,
)
from sharpwave.model import ExtremiserParams, RadialData, Setting, gaussian, preset, sobolev_norm_sq
from sharpwave.numerics import sphere_area

PI = math.pi


def test_T_beta_foschi_d3():
    T = T_beta(preset("foschi", 3), Setting(3, 0.0))
    assert T.is_constant
    assert T.constant == pytest.approx((2 * PI) ** -3 / 4, rel=1e-14)


@pytest.mark.parametrize("d,beta", [(3, 0.0), (4, -0.3), (3, -0.1), (5, 0.2)])
def test_T_beta_closed_form_matches_quadrature(d, beta):
    s = Setting(d, beta)
    f = preset("extremiser(-1.3+0.2j,0.45,0.1-0.3j)", d)
    a, b = T_beta(f, s), T_beta(f, s, closed_form=False)
    t = np.linspace(-0.99, 0.99, 9)
    assert np.allclose(a.of_t(t), b.of_t(t), rtol=1e-9)


def test_T_beta_radial_and_errors():
    s = Setting(3, 0.0)
    T = T_beta(gaussian(), s)
    # int r^3 e^{-2 r^2} dr = 1/8
    assert T.constant == pytest.approx((2 * PI) ** -3 / 8, rel=1e-10)
    with pytest.raises(DomainError):
        T_beta(preset("foschi", 2), Setting(2, -0.25))
    with pytest.raises(DomainError):
        T_beta(preset("foschi", 4), Setting(3, 0.0))


def test_T_beta_l1_identity():
    # int T_beta f = (2 pi)^{-d} int |f^|^2 |xi|^{(d-1)/2 + 2 beta}
    for d, beta in ((3, -0.1), (4, -0.3)):
        s = Setting(d, beta)
        f = preset("extremiser(-1,0.4,0.2)", d)
        mass = lp_sphere_norm(T_beta(f, s), 1.0)
        ref = sobolev_norm_sq(f, (d - 1) / 4 + beta, s)
        assert mass == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_H_lambda_constants(d):
    one = SphericalFunction.const(d, 1.0)
    assert H_lambda(one, one, 0.0) == pytest.approx(sphere_area(d) ** 2, rel=1e-13)
    with pytest.raises(DomainError):
        H_lambda(one, one, d - 1.0)


def test_H_lambda_d3_closed_form():
    # for d = 3: int int |w1 - w2|^{-lam} = 8 pi^2 2^{1-lam} / (1 - lam/2)
    one = SphericalFunction.const(3, 1.0)
    for lam in (-2.0, -0.6, 0.5, 1.5):
        ref = 8 * PI**2 * 2 ** (1 - lam) / (1 - lam / 2)
        assert H_lambda(one, one, lam) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("d,lam", [(3, -0.6), (3, 0.4), (4, 0.8)])
def test_H_lambda_zonal_vs_mc(d, lam):
    axis = np.eye(d)[0]
    g1 = SphericalFunction.zonal(d, lambda t: 1 + 0.5 * t, axis)
    g2 = SphericalFunction.zonal(d, lambda t: np.exp(t), -axis)
    q = H_lambda(g1, g2, lam)
    m, se = H_lambda_mc(g1, g2, lam, n=400_000, seed=5)
    assert abs(q - m) <= 4 * se


def test_hls_constant_route():
    # hls constant times |S|^{2 - lam/(d-1)} = int int |w1 - w2|^{-lam}, equality for constants
    for d, lam in ((3, 0.4), (4, 1.2), (5, 0.7)):
        one = SphericalFunction.const(d, 1.0)
        p = 2 * (d - 1) / (2 * (d - 1) - lam)
        rhs = K.hls_constant(lam, d) * lp_sphere_norm(one, p) ** 2
        assert H_lambda(one, one, lam) == pytest.approx(rhs, rel=1e-12)


def test_zonal_pair_integral_symmetry():
    P1 = lambda t: 1 + t  # noqa: E731
    P2 = lambda t: np.exp(0.3 * t)  # noqa: E731
    for d in (2, 3, 5):
        a = zonal_pair_integral(d, P1, P2, 0.4)
        b = zonal_pair_integral(d, P2, P1, 0.4)
        assert a == pytest.approx(b, rel=1e-12)


def test_lp_sphere_norm():
    for d in (2, 3, 4):
        one = SphericalFunction.const(d, 2.0)
        for p in (0.5, 1.0, 4 / 3, 2.0):
            assert lp_sphere_norm(one, p) == pytest.approx(2 * sphere_area(d) ** (1 / p), rel=1e-14)
    g = SphericalFunction.zonal(3, lambda t: t, [0, 0, 1.0])
    # int |t|^2 over S^2 = 4 pi / 3
    assert lp_sphere_norm(g, 2.0) == pytest.approx(math.sqrt(4 * PI / 3), rel=1e-13)
    gen = SphericalFunction(3, func=lambda w: w[..., 2])
    assert lp_sphere_norm(gen, 2.0, n_mc=400_000) == pytest.approx(math.sqrt(4 * PI / 3), rel=1e-2)
    with pytest.raises(DomainError):
        lp_sphere_norm(g, 0.0)


def test_lp_holder_check():
    # Hoelder: ||g||_p <= |S|^{1/p - 1/2} ||g||_2 for p < 2
    d = 4
    s = Setting(d, -0.3)
    g = T_beta(preset("extremiser(-1,0.4,0.2)", d), s)
    p = s.p
    assert lp_sphere_norm(g, p) <= sphere_area(d) ** (1 / p - 0.5) * lp_sphere_norm(g, 2.0)


def test_I_beta_foschi_d3():
    s = Setting(3, 0.0)
    f = preset("foschi", 3)
    assert I_beta(f, f, s) == pytest.approx(PI**2, rel=1e-12)
    for route in ("radial", "direct", "hls"):
        assert I_beta(f, f, s, route=route) == pytest.approx(PI**2, rel=1e-10)


@pytest.mark.parametrize("d,beta", [(3, -0.1), (4, -0.3), (3, 0.2), (5, 0.0)])
def test_I_beta_routes_agree_for_extremisers(d, beta):
    s = Setting(d, beta)
    f = preset("extremiser(-1+0.3j,0.35,0.1)", d)
    g = preset("extremiser(-1.5,-0.2,0)", d)
    direct = I_beta(f, g, s, route="direct")
    assert I_beta(g, f, s, route="direct") == pytest.approx(direct, rel=1e-10)
    if s.lam < d - 1 and beta <= (3 - d) / 4 + 1e-15 and s.lam > -2:
        assert I_beta(f, g, s, route="hls") == pytest.approx(direct, rel=1e-8)


def test_I_beta_errors():
    s = Setting(4, -1.0)
    f = preset("foschi", 4)
    with pytest.raises(DomainError, match=r"\(2-d\)/2"):
        I_beta(f, f, s)
    with pytest.raises(UnsupportedDataError):
        I_beta(preset("extremiser(-1,0.2,0)", 4), f, Setting(4, 0.0), route="radial")
    with pytest.raises(ValueError):
        I_beta(f, f, Setting(4, 0.0), route="bogus")


def test_gaussian_sign_switch_and_margin():
    # at beta = 0 the two products have the same norm for any data
    s = Setting(3, 0.0)
    g = gaussian()
    pm = lhs_norm_sq(g, g, s, SignMode.PlusMinus)
    pp = lhs_norm_sq(g, g, s, SignMode.PlusPlus)
    assert pm == pytest.approx(pp, rel=1e-9)
    assert pm / (K.W(0, 3) * I_beta(g, g, s)) == pytest.approx(0.8476, abs=5e-4)


@pytest.mark.parametrize("mode", list(SignMode))
def test_lhs_foschi_target(mode):
    s = Setting(3, 0.0)
    f = preset("foschi", 3)
    assert lhs_norm_sq(f, f, s, mode) == pytest.approx(2**-7 * PI**-5, rel=1e-10)


@given(st.sampled_from([0.5, 2.0]), st.sampled_from([(3, 0.0), (2, 0.25), (4, 0.1)]))
def test_lhs_scaling_invariance(mu, db):
    d, beta = db
    s = Setting(d, beta)
    g = gaussian()
    h = g.scaled(mu)
    r0 = lhs_norm_sq(g, g, s) / I_beta(g, g, s)
    r1 = lhs_norm_sq(h, h, s) / I_beta(h, h, s)
    assert r1 == pytest.approx(r0, rel=1e-9)


def test_lhs_sesquilinear_symmetry():
    s = Setting(3, 0.25)
    f, g = gaussian(), preset("foschi", 3)
    assert lhs_norm_sq(f, g, s) == pytest.approx(lhs_norm_sq(g, f, s), rel=1e-10)


def test_lhs_quadrature_convergence():
    s = Setting(4, 0.1)
    g = RadialData(lambda r: np.exp(-r * r) * (1 + r), 0.0, 1.0, "poly-gauss")
    a = lhs_norm_sq(g, g, s, quad=LHSQuadrature(48, 1 / 16))
    b = lhs_norm_sq(g, g, s, quad=LHSQuadrature(64, 1 / 24))
    assert a == pytest.approx(b, rel=1e-10)
    assert LHSQuadrature.from_nodes(48).step == pytest.approx(1 / 18)


def test_lhs_errors():
    with pytest.raises(UnsupportedDataError):
        lhs_norm_sq(preset("extremiser(-1,0.3,0)", 3), gaussian(), Setting(3, 0.0))
    with pytest.raises(DomainError):
        lhs_norm_sq(gaussian(), gaussian(), Setting(3, -0.6))


@pytest.mark.slow
def test_lhs_pp_against_ellipsoid_oracle():
    # independent route: the space-time transform of the (++) product at (tau, xi) is
    # (2 pi)^{1-d} K(tau, xi), K = int f^(x) g^(xi - x) delta(|x| + |xi - x| - tau) dx,
    # evaluated on the ellipsoid by the geometry module and integrated with scipy
    from scipy.integrate import quad

    from sharpwave.geometry import integrate_delta_ellipsoid

    d, beta = 3, 0.25
    g = gaussian()

    def K(tau, R):
        xi = np.zeros(d)
        xi[0] = R

        def F(x):
            return np.real(g.profile(np.linalg.norm(x, axis=-1)) * g.profile(np.linalg.norm(xi - x, axis=-1)))

        return integrate_delta_ellipsoid(F, tau, xi, n=80)

    def inner(R):
        return quad(lambda u: ((R + u) ** 2 - R * R) ** (2 * beta) * K(R + u, R) ** 2, 0, np.inf,
                    epsabs=0, epsrel=1e-8, limit=200)[0]

    outer = quad(lambda R: R ** (d - 1) * inner(R), 0, np.inf, epsabs=0, epsrel=1e-7, limit=200)[0]
    oracle = (2 * PI) ** (1 - 3 * d) * sphere_area(d) * outer
    assert lhs_norm_sq(g, g, Setting(d, beta), SignMode.PlusPlus) == pytest.approx(oracle, rel=1e-4)
