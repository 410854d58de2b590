"""Minkowski geometry of the light-cone convolution.

The integral over {x : |x| + |xi - x| = tau} is computed in polar
coordinates about the focus at the origin: the ray in direction w meets the
prolate ellipsoid once, at r(w) = (tau^2 - |xi|^2) / (2 (tau - xi.w)), and
the delta contributes the co-area factor
1 / d_r(r + |xi - r w|) = (tau - r) / (tau - xi.w).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import lemma31_closed_form
from .errors import DegenerateConfigurationError, DomainError
from .model import ExtremiserParams, FourierData, MinkowskiVector
from .numerics import gauss_jacobi, mc_sphere, sphere_area, tanh_sinh_rule


@dataclass(frozen=True)
class LorentzBoost:
    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if not float(v @ v) < 1:
            raise DomainError(f"boost velocity must satisfy |v| < 1, got |v| = {np.linalg.norm(v)}")
        object.__setattr__(self, "v", v)

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - float(self.v @ self.v))

    @property
    def d(self) -> int:
        return len(self.v)

    def matrix(self) -> np.ndarray:
        """(d+1) x (d+1) matrix of the map, (t, x) ordering."""
        d, v, g = self.d, self.v, self.gamma
        v2 = float(v @ v)
        k = (g - 1.0) / v2 if v2 > 0 else 0.0
        m = np.eye(d + 1)
        m[0, 0] = g
        m[0, 1:] = -g * v
        m[1:, 0] = -g * v
        m[1:, 1:] += k * np.outer(v, v)
        return m

    def inverse(self) -> "LorentzBoost":
        return LorentzBoost(-self.v)


def boost_for(tau: float, xi) -> LorentzBoost:
    """The boost taking ((tau^2 - |xi|^2)^{1/2}, 0) to (tau, xi)."""
    xi = np.asarray(xi, dtype=float)
    if not np.linalg.norm(xi) < tau:
        raise DomainError("need |xi| < tau (timelike frequency)")
    return LorentzBoost(-xi / tau)


def boost_apply(L: LorentzBoost, w: MinkowskiVector) -> MinkowskiVector:
    v, g = L.v, L.gamma
    t, x = w.t, w.x
    v2 = float(v @ v)
    vx = float(v @ x)
    k = (g - 1.0) / v2 if v2 > 0 else 0.0
    return MinkowskiVector(g * (t - vx), x + (k * vx - g * t) * v)


def _frame(axis: np.ndarray, other: np.ndarray) -> tuple[np.ndarray, np.ndarray | None]:
    """Unit vectors e1 _|_ axis in span(axis, other) and e2 _|_ both (None for d = 2)."""
    d = len(axis)
    rest = other - (other @ axis) * axis
    if np.linalg.norm(rest) < 1e-12 * max(np.linalg.norm(other), 1.0):
        # any orthogonal direction will do
        j = int(np.argmin(np.abs(axis)))
        rest = np.zeros(d)
        rest[j] = 1.0
        rest -= (rest @ axis) * axis
    e1 = rest / np.linalg.norm(rest)
    if d == 2:
        return e1, None
    basis = np.linalg.svd(np.stack([axis, e1]))[2][2]
    return e1, basis


def _sphere_nodes(d: int, axis: np.ndarray, other: np.ndarray, n: int, pole_power: float, polar: str = "jacobi"):
    """Nodes w on S^{d-1} and weights for int (1 - w.axis)^pole_power G(w) dw.

    Exact in the directions orthogonal to span(axis, other) only for G
    invariant under rotations fixing that plane. ``polar`` selects Gauss-Jacobi
    or tanh-sinh (n read as 1/step) in the polar variable u = w.axis.
    """
    a = (d - 3) / 2
    if polar == "jacobi":
        ru = gauss_jacobi(n, a + pole_power, a)
        u, wu = ru.nodes, ru.weights
        su = np.sqrt(1.0 - u * u)
    elif polar == "tanh-sinh":
        rt = tanh_sinh_rule(1.0 / n, min(a + pole_power, a))
        u, wu = rt.nodes, rt.jacobi_weights(a + pole_power, a)
        su = np.sqrt(rt.one_minus * rt.one_plus)
    else:
        raise ValueError(f"unknown polar rule {polar!r}")
    e1, e2 = _frame(axis, other)
    if d == 2:
        c = np.array([-1.0, 1.0])
        wc = np.array([1.0, 1.0])
        lat = c[None, :, None] * e1
    else:
        b = (d - 4) / 2
        rc = gauss_jacobi(n, b, b)
        c, wc = rc.nodes, rc.weights * sphere_area(d - 2)
        lat = c[None, :, None] * e1 + np.sqrt(1.0 - c * c)[None, :, None] * e2
    omega = u[:, None, None] * axis + su[:, None, None] * lat
    weights = wu[:, None] * wc[None, :]
    return omega.reshape(-1, d), weights.reshape(-1)


def integrate_delta_ellipsoid(
    F: Callable[[np.ndarray], np.ndarray],
    tau: float,
    xi,
    n: int = 48,
    axis=None,
    pole_power: float = 0.0,
    polar: str = "jacobi",
) -> float:
    """int_{R^d} F(x) (1 - x'.axis)^pole_power delta(|x| + |xi - x| - tau) dx.

    Polar angle is measured from ``axis`` (default xi/|xi|); the factor
    (1 - x'.axis)^pole_power is absorbed into the Jacobi weight. F must be
    invariant under rotations fixing span(axis, xi).
    """
    xi = np.asarray(xi, dtype=float)
    d = len(xi)
    nxi = float(np.linalg.norm(xi))
    if not nxi < tau:
        raise DomainError("need |xi| < tau: the constraint set is empty or degenerate")
    if axis is None:
        axis = xi / nxi if nxi > 0 else np.eye(d)[0]
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    omega, w = _sphere_nodes(d, axis, xi, n, pole_power, polar)
    xo = omega @ xi
    r = (tau * tau - nxi * nxi) / (2.0 * (tau - xo))
    jac = r ** (d - 1) * (tau - r) / (tau - xo)
    x = r[:, None] * omega
    return float(np.sum(w * jac * F(x)))


def integrate_delta_ellipsoid_mc(
    F: Callable[[np.ndarray], np.ndarray], tau: float, xi, n: int, seed: int
) -> tuple[float, float]:
    """Same integral (pole_power 0) by uniform directions; returns (estimate, stderr)."""
    xi = np.asarray(xi, dtype=float)
    d = len(xi)
    nxi = float(np.linalg.norm(xi))
    if not nxi < tau:
        raise DomainError("need |xi| < tau")
    omega = mc_sphere(d, n, seed)
    xo = omega @ xi
    r = (tau * tau - nxi * nxi) / (2.0 * (tau - xo))
    vals = sphere_area(d) * r ** (d - 1) * (tau - r) / (tau - xo) * F(r[:, None] * omega)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n))


def _check_pair(y1: np.ndarray, y2: np.ndarray, min_angle: float = 1e-6) -> None:
    n1, n2 = np.linalg.norm(y1), np.linalg.norm(y2)
    if n1 == 0 or n2 == 0:
        raise DomainError("y1 and y2 must be nonzero")
    cos = float(np.clip(y1 @ y2 / (n1 * n2), -1.0, 1.0))
    if math.acos(cos) < min_angle:
        raise DegenerateConfigurationError("y1 and y2 are (nearly) parallel")


def I_beta_numeric(y1, y2, beta: float, d: int | None = None, n: int = 64) -> float:
    """Quadrature value of int int (|y1||x2| - y1.x2)^{2 beta} / (|x1||x2|) delta(...) dx1 dx2.

    The vector delta eliminates x1 = xi - x2; x2 runs over the ellipsoid with
    polar axis y1/|y1|, which puts the vanishing of |y1||x2| - y1.x2 at the
    pole where the Jacobi weight absorbs it.
    """
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    d = len(y1) if d is None else d
    if not beta > (1 - d) / 4:
        raise DomainError(f"beta must exceed (1-d)/4 (d={d}, beta={beta})")
    _check_pair(y1, y2)
    n1, n2 = float(np.linalg.norm(y1)), float(np.linalg.norm(y2))
    tau, xi = n1 + n2, y1 + y2

    def F(x2):
        r2 = np.linalg.norm(x2, axis=-1)
        r1 = tau - r2  # on the ellipsoid |x1| = tau - |x2|
        return (n1 * r2) ** (2 * beta) / (r1 * r2)

    # tanh-sinh in the polar variable: nearly parallel pairs give long thin
    # ellipsoids whose mass sits close to the pole
    return integrate_delta_ellipsoid(F, tau, xi, n, axis=y1 / n1, pole_power=2 * beta, polar="tanh-sinh")


def random_pair(d: int, rng: np.random.Generator, min_angle: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """Standard normal (y1, y2), redrawn while their angle is below ``min_angle``."""
    while True:
        y1, y2 = rng.standard_normal(d), rng.standard_normal(d)
        cos = y1 @ y2 / (np.linalg.norm(y1) * np.linalg.norm(y2))
        if math.acos(float(np.clip(cos, -1, 1))) >= min_angle:
            return y1, y2


def lemma31_compare(y1, y2, beta: float, d: int, n: int = 64) -> tuple[float, float, float]:
    """(numeric, closed form, relative error)."""
    num = I_beta_numeric(y1, y2, beta, d, n)
    ref = lemma31_closed_form(y1, y2, beta, d)
    return num, ref, abs(num - ref) / abs(ref)


def boost_null_pair(L: LorentzBoost, y1, y2) -> tuple[np.ndarray, np.ndarray]:
    """Spatial parts of L(|y_j|, y_j); null vectors stay null."""
    out = []
    for y in (y1, y2):
        y = np.asarray(y, dtype=float)
        out.append(boost_apply(L, MinkowskiVector(float(np.linalg.norm(y)), y)).x)
    return out[0], out[1]


@dataclass(frozen=True)
class Lemma32Record:
    lhs: float
    predicted: float
    omega_star: np.ndarray
    z_norm_gap: float


def lemma32_check(y1, y2, x) -> Lemma32Record:
    """Both sides of the pairing identity on the sphere 2|x| = (tau^2 - |xi|^2)^{1/2}.

    ``x`` supplies only a direction; it is rescaled to the required radius.
    """
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    x = np.asarray(x, dtype=float)
    _check_pair(y1, y2)
    n1, n2 = float(np.linalg.norm(y1)), float(np.linalg.norm(y2))
    tau, xi = n1 + n2, y1 + y2
    q = n1 * n2 - float(y1 @ y2)
    radius = 0.5 * math.sqrt(tau * tau - float(xi @ xi))
    xdir = x / np.linalg.norm(x)
    x = radius * xdir
    L = boost_for(tau, xi)
    Lx = boost_apply(L, MinkowskiVector(radius, x))
    # Minkowski-type pairing (|y1|, -y1) . (s, z) = |y1| s - y1.z
    lhs = n1 * Lx.t - float(y1 @ Lx.x)
    z = 2 * radius * (y2 * (radius + n1) - y1 * (radius + n2)) / (n1 + n2 + 2 * radius)
    nz = float(np.linalg.norm(z))
    omega_star = z / nz
    predicted = 0.5 * q * (1.0 + float(xdir @ omega_star))
    return Lemma32Record(lhs, predicted, omega_star, abs(nz - q))


def equality_condition_residual(f: FourierData, g: FourierData, n_samples: int, seed: int, d: int | None = None) -> float:
    """Max relative mismatch of |x1||x2| f^(x1) g^(x2) = |y1||y2| f^(y1) g^(y2)
    over random points of {x1 + x2 = y1 + y2, |x1| + |x2| = |y1| + |y2|}.
    """
    if d is None:
        for data in (f, g):
            if isinstance(data, ExtremiserParams):
                d = data.d
        if d is None:
            raise DomainError("dimension could not be inferred; pass d")
    rng = np.random.default_rng(seed)
    y1 = rng.standard_normal((n_samples, d))
    y2 = rng.standard_normal((n_samples, d))
    n1, n2 = np.linalg.norm(y1, axis=1), np.linalg.norm(y2, axis=1)
    tau, xi = n1 + n2, y1 + y2
    omega = rng.standard_normal((n_samples, d))
    omega /= np.linalg.norm(omega, axis=1, keepdims=True)
    nxi2 = np.einsum("ij,ij->i", xi, xi)
    r = (tau**2 - nxi2) / (2.0 * (tau - np.einsum("ij,ij->i", omega, xi)))
    x1 = r[:, None] * omega
    x2 = xi - x1
    m1, m2 = np.linalg.norm(x1, axis=1), np.linalg.norm(x2, axis=1)
    lhs = m1 * m2 * f(x1) * g(x2)
    rhs = n1 * n2 * f(y1) * g(y2)
    scale = np.maximum(np.abs(lhs), np.abs(rhs))
    ok = scale > 0
    return float(np.max(np.abs(lhs - rhs)[ok] / scale[ok])) if ok.any() else 0.0
