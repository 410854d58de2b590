"""Right-hand-side functionals and the weighted space-time norms.

Left-hand side, radial data. With the space-time transform of u conj(v)
(resp. u v) written through M(tau, xi) = int f^(eta) conj g^(eta - xi)
delta(tau - |eta| + |eta - xi|) d eta, Plancherel gives

    || |box|^beta (u v) ||^2 = (2 pi)^{1-3d} int |tau^2 - |xi|^2|^{2 beta} |M|^2.

For radial data M depends on (tau, rho = |xi|) only and the eta-integral is
taken in bipolar coordinates (r, s) = (|eta|, |eta - xi|), where

    d eta = |S^{d-2}| h^{d-3} (r s / rho) dr ds,
    h^2 = (rho^2 - (r - s)^2)((r + s)^2 - rho^2) / (4 rho^2).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AccuracyError, DomainError, UnsupportedDataError
from .model import (
    ExtremiserParams,
    FourierData,
    RadialData,
    Setting,
    as_radial,
    extremiser_radial_moment,
    radial_moment,
    require_radial,
)
from .numerics import exp_sinh_rule, gauss_jacobi, mc_sphere, sphere_area, sphere_integrate_zonal


class SignMode(enum.Enum):
    PlusMinus = "pm"
    PlusPlus = "pp"


@dataclass(frozen=True)
class SphericalFunction:
    """Function on S^{d-1}: constant, zonal (profile of w . axis) or general."""

    d: int
    func: Callable[[np.ndarray], np.ndarray] | None = None
    axis: np.ndarray | None = None
    profile: Callable[[np.ndarray], np.ndarray] | None = None
    constant: float | None = None

    @classmethod
    def const(cls, d: int, value: float) -> "SphericalFunction":
        return cls(d, constant=float(value))

    @classmethod
    def zonal(cls, d: int, profile, axis) -> "SphericalFunction":
        axis = np.asarray(axis, dtype=float)
        return cls(d, axis=axis / np.linalg.norm(axis), profile=profile)

    @property
    def is_constant(self) -> bool:
        return self.constant is not None

    @property
    def is_zonal(self) -> bool:
        return self.is_constant or self.profile is not None

    def of_t(self, t: np.ndarray) -> np.ndarray:
        """Values as a function of t = w . axis (zonal functions only)."""
        if self.is_constant:
            return np.full(np.shape(t), self.constant)
        if self.profile is None:
            raise UnsupportedDataError("not a zonal function")
        return self.profile(t)

    def __call__(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        if self.is_constant:
            return np.full(omega.shape[:-1], self.constant)
        if self.profile is not None:
            return self.profile(omega @ self.axis)
        return self.func(omega)


# -- T_beta ------------------------------------------------------------------


def _extremiser_exponent(setting: Setting) -> float:
    k1 = (3 * setting.d - 5) / 2 + 2 * setting.beta
    if not k1 > 0:
        raise DomainError(
            f"T_beta of extremiser data diverges at r = 0: need (3d-5)/2 + 2 beta > 0 (d={setting.d}, beta={setting.beta})"
        )
    return k1


def T_beta(data: FourierData, setting: Setting, closed_form: bool = True) -> SphericalFunction:
    """T_beta f(w) = (2 pi)^{-d} int_0^inf |f^(r w)|^2 r^{(3d-3)/2 + 2 beta} dr."""
    d = setting.d
    pref = (2 * math.pi) ** (-d)
    rad = as_radial(data)
    if isinstance(data, ExtremiserParams):
        if data.d != d:
            raise DomainError(f"data lives in R^{data.d}, setting has d={d}")
        k1 = _extremiser_exponent(setting)
        if closed_form:
            # |f^|^2 r^power = |lam|^2 e^{2 Re c} r^{k1-1} e^{-2(-Re a)(1 + zeta.w) r}
            amp = pref * abs(data.lam) ** 2 * math.exp(2 * data.c.real)
            C = amp * math.exp(math.lgamma(k1) - k1 * math.log(-2 * data.a.real))
            if data.has_radial_modulus:
                return SphericalFunction.const(d, C)
            tilt = float(np.linalg.norm(data.zeta))
            return SphericalFunction.zonal(d, lambda t: C / (1.0 - tilt * t) ** k1, data.axis)
        power = setting.radial_power
        if data.has_radial_modulus:
            return SphericalFunction.const(d, pref * float(extremiser_radial_moment(data, power, np.array([0.0]))[0]))
        return SphericalFunction.zonal(d, lambda t: pref * extremiser_radial_moment(data, power, t), data.axis)
    if rad is not None:
        return SphericalFunction.const(d, pref * radial_moment(rad, setting.radial_power))
    raise UnsupportedDataError("T_beta needs radial or extremiser data")


# -- sphere pairings -----------------------------------------------------------


def _common_axis(d: int, *fs: SphericalFunction) -> tuple[np.ndarray, list[Callable]]:
    """A shared axis and profiles in t = w . axis for zonal functions."""
    axis = None
    for f in fs:
        if not f.is_zonal:
            raise UnsupportedDataError("zonal quadrature needs zonal inputs")
        if f.axis is not None and not f.is_constant:
            axis = f.axis if axis is None else axis
    if axis is None:
        axis = np.eye(d)[0]
    profiles = []
    for f in fs:
        if f.is_constant or f.axis is None:
            profiles.append(f.of_t)
            continue
        c = float(f.axis @ axis)
        if abs(c - 1) < 1e-12:
            profiles.append(f.of_t)
        elif abs(c + 1) < 1e-12:
            profiles.append(lambda t, f=f: f.of_t(-t))
        else:
            raise UnsupportedDataError("zonal functions about different axes")
    return axis, profiles


def zonal_pair_integral(d: int, P1, P2, kernel_power: float, n: int = 64) -> complex:
    """int int P1(w1 . e) conj P2(w2 . e) (1 - w1 . w2)^kernel_power dw1 dw2.

    Inner integral in polar coordinates about w1: w2 = s w1 + sqrt(1-s^2) eta
    with eta on the S^{d-2} orthogonal to w1, so the kernel becomes the Jacobi
    weight (1 - s)^kernel_power.
    """
    a = (d - 3) / 2
    if not kernel_power + a > -1:
        raise DomainError(f"kernel (1 - w1.w2)^{kernel_power:g} is not integrable on S^{d - 1}")
    rt = gauss_jacobi(n, a, a)
    rs = gauss_jacobi(n, a + kernel_power, a)
    if d == 2:
        c, wc = np.array([-1.0, 1.0]), np.array([1.0, 1.0])
    else:
        b = (d - 4) / 2
        rc = gauss_jacobi(n, b, b)
        c, wc = rc.nodes, rc.weights * sphere_area(d - 2)
    s = rs.nodes[:, None]
    root = np.sqrt(1 - s * s)
    # one outer node at a time keeps P2 evaluations at n * len(c) points
    inner = np.array(
        [np.conj(P2(s * t1 + root * math.sqrt(1 - t1 * t1) * c[None, :])) @ wc @ rs.weights for t1 in rt.nodes]
    )
    # the c-rule already carries the mass |S^{d-2}| of the inner sphere
    return sphere_area(d - 1) * np.sum(rt.weights * P1(rt.nodes) * inner)


def H_lambda(g1: SphericalFunction, g2: SphericalFunction, lam: float, n: int = 64) -> float:
    """int int g1(w1) conj g2(w2) |w1 - w2|^{-lam} dw1 dw2.

    Zonal inputs about a common axis use nested quadrature; anything else
    falls back to H_lambda_mc (value only).
    """
    d = g1.d
    if not lam < d - 1:
        raise DomainError(f"H_lambda needs lambda < d - 1, got {lam} for d={d}")
    if g1.is_zonal and g2.is_zonal:
        _, (P1, P2) = _common_axis(d, g1, g2)
        # |w1 - w2|^2 = 2 (1 - w1.w2)
        val = 2.0 ** (-lam / 2) * zonal_pair_integral(d, P1, P2, -lam / 2, n)
        return float(np.real(val))
    return H_lambda_mc(g1, g2, lam)[0]


def H_lambda_mc(g1: SphericalFunction, g2: SphericalFunction, lam: float, n: int = 200_000, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo estimate of H_lambda with its standard error."""
    d = g1.d
    if not lam < d - 1:
        raise DomainError(f"H_lambda needs lambda < d - 1, got {lam} for d={d}")
    w1 = mc_sphere(d, n, seed)
    w2 = mc_sphere(d, n, seed + 1)
    dist = np.linalg.norm(w1 - w2, axis=1)
    vals = np.real(g1(w1) * np.conj(g2(w2))) * dist ** (-lam) * sphere_area(d) ** 2
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n))


def lp_sphere_norm(g: SphericalFunction, p: float, n: int = 64, n_mc: int = 200_000, seed: int = 0) -> float:
    """(int |g|^p dw)^{1/p}; p < 1 allowed."""
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    d = g.d
    if g.is_constant:
        return abs(g.constant) * sphere_area(d) ** (1 / p)
    if g.is_zonal:
        return sphere_integrate_zonal(d, lambda t: np.abs(g.of_t(t)) ** p, n) ** (1 / p)
    w = mc_sphere(d, n_mc, seed)
    return (sphere_area(d) * float(np.mean(np.abs(g(w)) ** p))) ** (1 / p)


# -- I_beta ---------------------------------------------------------------------


def _radial_moment_profile(data: FourierData, setting: Setting) -> tuple[Callable, np.ndarray | None]:
    """t -> int_0^inf |f^(r w)|^2 r^{(3d-3)/2 + 2 beta} dr by quadrature, plus its axis."""
    power = setting.radial_power
    rad = as_radial(data)
    if isinstance(data, ExtremiserParams) and not data.has_radial_modulus:
        return (lambda t: extremiser_radial_moment(data, power, t)), data.axis
    if isinstance(data, ExtremiserParams):
        m = float(extremiser_radial_moment(data, power, np.array([0.0]))[0])
        return (lambda t: np.full(np.shape(t), m)), None
    if rad is not None:
        m = radial_moment(rad, power)
        return (lambda t: np.full(np.shape(t), m)), None
    raise UnsupportedDataError("I_beta needs radial or extremiser data")


def I_beta(f: FourierData, g: FourierData, setting: Setting, route: str = "auto", n: int = 64) -> float:
    """int int |f^(y1)|^2 |g^(y2)|^2 (|y1||y2|)^{(d-1)/2 + 2 beta} (1 - y1'.y2')^{(d-3)/2 + 2 beta}.

    Routes: "radial" (two radial moments times one Jacobi angular integral),
    "direct" (quadrature radial moments against the kernel (1 - w1.w2)^e),
    "hls" (closed-form T_beta paired with |w1 - w2|^{-lambda}).
    """
    d, e = setting.d, setting.angular_power
    a = (d - 3) / 2
    if not e + a > -1:
        raise DomainError(f"angular factor of I_beta diverges: beta must exceed (2-d)/2 (d={d}, beta={setting.beta})")
    both_radial = as_radial(f) is not None and as_radial(g) is not None
    if route == "auto":
        route = "radial" if both_radial else "direct"
    if route == "radial":
        if not both_radial:
            raise UnsupportedDataError("radial route needs radial data")
        mf = radial_moment(require_radial(f), setting.radial_power)
        mg = radial_moment(require_radial(g), setting.radial_power)
        ang = sphere_area(d) * sphere_area(d - 1) * float(np.sum(gauss_jacobi(n, e + a, a).weights))
        return mf * mg * ang
    if route == "direct":
        pf, af = _radial_moment_profile(f, setting)
        pg, ag = _radial_moment_profile(g, setting)
        sf = SphericalFunction(d, axis=af, profile=pf) if af is not None else SphericalFunction(d, profile=pf)
        sg = SphericalFunction(d, axis=ag, profile=pg) if ag is not None else SphericalFunction(d, profile=pg)
        _, (P1, P2) = _common_axis(d, sf, sg)
        return float(np.real(zonal_pair_integral(d, P1, P2, e, n)))
    if route == "hls":
        Tf, Tg = T_beta(f, setting), T_beta(g, setting)
        return (2 * math.pi) ** (2 * d) * 2.0 ** (-e) * H_lambda(Tf, Tg, setting.lam, n)
    raise ValueError(f"unknown route {route!r}")


# -- left-hand side ---------------------------------------------------------------


@dataclass(frozen=True)
class LHSQuadrature:
    """Node counts for the nested left-hand-side quadrature."""

    n_gauss: int = 48
    step: float = 1 / 16

    @classmethod
    def from_nodes(cls, nodes: int) -> "LHSQuadrature":
        return cls(n_gauss=nodes, step=8.0 / (3 * nodes))


def lhs_norm_sq(
    f: FourierData,
    g: FourierData,
    setting: Setting,
    mode: SignMode = SignMode.PlusMinus,
    quad: LHSQuadrature = LHSQuadrature(),
) -> float:
    """|| |box|^beta (e^{itD}f conj(e^{itD}g)) ||^2 (or the (++) product) for radial data."""
    d, beta = setting.d, setting.beta
    rf, rg = as_radial(f), as_radial(g)
    if rf is None or rg is None:
        raise UnsupportedDataError("left-hand side is implemented for radial data only")
    if mode is SignMode.PlusMinus:
        setting.require("admissible_inequality")
        return _lhs_plus_minus(rf, rg, d, beta, quad)
    return _lhs_plus_plus(rf, rg, d, beta, quad)


def _prefactor(d: int) -> float:
    return (2 * math.pi) ** (1 - 3 * d) * sphere_area(d) * sphere_area(d - 1) ** 2 * 4.0 ** (3 - d)


def _lhs_plus_minus(f: RadialData, g: RadialData, d: int, beta: float, quad: LHSQuadrature) -> float:
    # (+-): s = r - tau, |tau| <= rho, w = r + s = rho + x, tau = rho t.
    #   M = |S^{d-2}| (2 rho)^{3-d} (rho^2 - tau^2)^{(d-3)/2} J,
    #   J = int_0^inf f(r) conj g(s) r s / (2 rho) (x (x + 2 rho))^{(d-3)/2} dx.
    a = (d - 3) / 2
    tpow = 2 * beta + d - 3
    if not tpow > -1:
        raise AccuracyError(f"radial (+-) norm diverges at the cone: need beta > (2-d)/2 (d={d}, beta={beta})")
    rate = f.decay + g.decay
    rho_rule = exp_sinh_rule(quad.step, 1.0 / rate, 0.5)
    x_rule = exp_sinh_rule(quad.step, 2.0 / rate, max(0.0, -a))
    t_rule = gauss_jacobi(quad.n_gauss, tpow, tpow)
    rho = rho_rule.nodes[:, None, None]
    t = t_rule.nodes[None, :, None]
    x = x_rule.nodes[None, None, :]
    tau = rho * t
    w = rho + x
    r = 0.5 * (w + tau)
    s = 0.5 * (w - tau)
    integrand = f.profile(r) * np.conj(g.profile(s)) * (r * s) / (2 * rho)
    if a != 0:
        integrand = integrand * (x * (x + 2 * rho)) ** a
    J = integrand @ x_rule.weights
    radial = (np.abs(J) ** 2) @ t_rule.weights
    vals = rho_rule.weights * rho_rule.nodes ** (d + 4 * beta) * radial
    return _prefactor(d) * math.fsum(vals)


def _lhs_plus_plus(f: RadialData, g: RadialData, d: int, beta: float, quad: LHSQuadrature) -> float:
    # (++): s = tau - r, tau >= rho, w = r - s = rho v, tau = rho + x.
    #   M = |S^{d-2}| 2^{3-d} (tau^2 - rho^2)^{(d-3)/2} K,
    #   K = int_{-1}^{1} (1 - v^2)^{(d-3)/2} f(r) g(s) r s / 2 dv.
    a = (d - 3) / 2
    xpow = 2 * beta + d - 3
    if not xpow > -1:
        raise AccuracyError(f"radial (++) norm diverges at the cone: need beta > (2-d)/2 (d={d}, beta={beta})")
    rate = f.decay + g.decay
    rho_rule = exp_sinh_rule(quad.step, 1.0 / rate, 0.5)
    x_rule = exp_sinh_rule(quad.step, 1.0 / rate, max(0.0, -xpow))
    v_rule = gauss_jacobi(quad.n_gauss, a, a)
    rho = rho_rule.nodes[:, None, None]
    x = x_rule.nodes[None, :, None]
    v = v_rule.nodes[None, None, :]
    tau = rho + x
    r = 0.5 * (tau + rho * v)
    s = 0.5 * (tau - rho * v)
    K = (f.profile(r) * g.profile(s) * (r * s) / 2) @ v_rule.weights
    xs = x_rule.nodes[None, :]
    rr = rho_rule.nodes[:, None]
    radial = (np.abs(K) ** 2 * (xs * (xs + 2 * rr)) ** xpow) @ x_rule.weights
    vals = rho_rule.weights * rho_rule.nodes ** (d - 1) * radial
    return _prefactor(d) * math.fsum(vals)
