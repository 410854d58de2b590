"""Special functions, quadrature rules and sphere sampling.

Everything downstream integrates either over a compact interval with an
algebraic (Jacobi) weight, or over the half line with an integrable
singularity at 0 and exponential decay at infinity. The first case uses
Gauss-Jacobi rules, the second a double-exponential (exp-sinh) rule.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

from .errors import AccuracyError, DomainError

SEMILINE_TOL = 1e-9


def log_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def log_beta(x: float, y: float) -> float:
    if not (x > 0 and y > 0):
        raise DomainError(f"beta function requires positive arguments, got ({x!r}, {y!r})")
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def beta_fn(x: float, y: float) -> float:
    """B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), evaluated in log space."""
    return math.exp(log_beta(x, y))


def sphere_area(d: int) -> float:
    """Surface measure of S^{d-1} in R^d; |S^0| = 2."""
    if d < 1:
        raise DomainError(f"sphere dimension must be >= 1, got {d}")
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


@dataclass(frozen=True)
class Quadrature1D:
    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple[float, float]

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, F: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.sum(self.weights * F(self.nodes)))

    def mapped(self, a: float, b: float) -> "Quadrature1D":
        """Affine image of a rule on [-1, 1] onto [a, b] (weights scale by (b-a)/2)."""
        lo, hi = self.domain
        if (lo, hi) != (-1.0, 1.0):
            raise DomainError("only rules on [-1, 1] can be mapped")
        half = 0.5 * (b - a)
        return Quadrature1D(a + half * (self.nodes + 1.0), half * self.weights, (a, b))


_JACOBI_CACHE: dict[tuple[int, float, float], Quadrature1D] = {}


def gauss_jacobi(n: int, alpha: float, beta_w: float) -> Quadrature1D:
    """Rule for int_{-1}^{1} (1-t)^alpha (1+t)^beta_w F(t) dt, exact for deg F <= 2n-1."""
    if n < 1:
        raise DomainError(f"need at least one node, got n={n}")
    if not (alpha > -1 and beta_w > -1):
        raise DomainError(f"Jacobi exponents must exceed -1, got ({alpha!r}, {beta_w!r})")
    key = (n, float(alpha), float(beta_w))
    rule = _JACOBI_CACHE.get(key)
    if rule is None:
        x, w = roots_jacobi(n, alpha, beta_w)
        rule = Quadrature1D(np.asarray(x, dtype=float), np.asarray(w, dtype=float), (-1.0, 1.0))
        rule.nodes.flags.writeable = False
        rule.weights.flags.writeable = False
        _JACOBI_CACHE[key] = rule
    return rule


def exp_sinh_rule(
    step: float = 1 / 16,
    scale: float = 1.0,
    sing_order: float = 0.0,
    reach: float = 200.0,
) -> Quadrature1D:
    """Double-exponential rule on (0, inf) with nodes x = scale * exp(pi/2 sinh u).

    ``sing_order`` is the strength s of an integrable r^{-s} singularity at 0;
    it sets how far the left tail is carried. ``reach`` is the largest node
    in units of ``scale``.
    """
    if not sing_order < 1:
        raise AccuracyError(f"integrand ~ r^-{sing_order} is not integrable at 0")
    if scale <= 0 or step <= 0:
        raise DomainError("scale and step must be positive")
    # left tail: (x/scale)^(1-s) < 1e-17, clamped above the underflow threshold
    log_left = max(-39.0 / (1.0 - sing_order), -700.0)
    u_lo = math.asinh(2.0 * log_left / math.pi)
    u_hi = math.asinh(2.0 * math.log(reach) / math.pi)
    k = np.arange(math.floor(u_lo / step), math.ceil(u_hi / step) + 1)
    u = k * step
    e = np.exp(0.5 * math.pi * np.sinh(u))
    nodes = scale * e
    weights = step * 0.5 * math.pi * np.cosh(u) * nodes
    return Quadrature1D(nodes, weights, (0.0, math.inf))


@dataclass(frozen=True)
class EndpointRule:
    """Rule on [-1, 1] that also carries 1 - t and 1 + t without cancellation."""

    nodes: np.ndarray
    weights: np.ndarray
    one_minus: np.ndarray
    one_plus: np.ndarray

    def jacobi_weights(self, alpha: float, beta_w: float) -> np.ndarray:
        """Weights for int (1-t)^alpha (1+t)^beta_w F(t) dt."""
        if not (alpha > -1 and beta_w > -1):
            raise DomainError(f"Jacobi exponents must exceed -1, got ({alpha!r}, {beta_w!r})")
        return self.weights * self.one_minus**alpha * self.one_plus**beta_w


def tanh_sinh_rule(step: float = 1 / 32, min_power: float = -0.5) -> EndpointRule:
    """tanh-sinh nodes t = tanh(pi/2 sinh u) on [-1, 1].

    Carried far enough into both tails for endpoint weights (1 -+ t)^a with
    a >= ``min_power`` > -1.
    """
    if not min_power > -1:
        raise DomainError("endpoint exponent must exceed -1")
    # need (1 - t)^(1 + a) below 1e-17; 1 - t ~ 2 exp(-2z)
    z_max = min(40.0 / (1.0 + min_power), 350.0) / 2.0
    u_max = math.asinh(2.0 * z_max / math.pi)
    k = np.arange(-math.ceil(u_max / step), math.ceil(u_max / step) + 1)
    u = k * step
    z = 0.5 * math.pi * np.sinh(u)
    t = np.tanh(z)
    one_minus = 2.0 / (np.exp(2.0 * z) + 1.0)
    one_plus = 2.0 / (np.exp(-2.0 * z) + 1.0)
    weights = step * 0.5 * math.pi * np.cosh(u) / np.cosh(z) ** 2
    keep = (one_minus > 0) & (one_plus > 0) & (weights > 0)
    return EndpointRule(t[keep], weights[keep], one_minus[keep], one_plus[keep])


def integrate_semiline(
    F: Callable[[np.ndarray], np.ndarray],
    sing_order: float = 0.0,
    decay_hint: float = 1.0,
    tol: float = SEMILINE_TOL,
) -> float:
    """int_0^inf F(r) dr for F ~ r^{-sing_order} at 0 with decay rate ~ decay_hint.

    Halves the exp-sinh step until two successive levels agree to ``tol``
    and checks that the outermost nodes carry negligible mass; raises
    AccuracyError otherwise.
    """
    if decay_hint <= 0:
        raise DomainError(f"decay_hint must be positive, got {decay_hint!r}")
    scale = 1.0 / decay_hint
    reach = 200.0
    for _ in range(4):
        prev = None
        step = 0.5
        for _level in range(8):
            rule = exp_sinh_rule(step, scale, sing_order, reach)
            vals = rule.weights * F(rule.nodes)
            if not np.all(np.isfinite(vals)):
                raise AccuracyError("integrand is not finite at a quadrature node")
            total = math.fsum(vals)
            if prev is not None and abs(total - prev) <= tol * max(abs(total), 1e-300):
                tail = abs(vals[-3:]).sum()
                if tail <= tol * max(abs(total), 1e-300):
                    return total
                break
            prev = total
            step *= 0.5
        reach *= 4.0
    raise AccuracyError("semi-infinite integral did not converge (truncation tail above tolerance)")


def sphere_integrate_zonal(d: int, F: Callable[[np.ndarray], np.ndarray], n: int = 64) -> float:
    """int_{S^{d-1}} F(w . e1) dw = |S^{d-2}| int_{-1}^{1} (1-t^2)^{(d-3)/2} F(t) dt.

    d = 1 is the two-point sphere S^0 = {-1, 1}.
    """
    if d == 1:
        return float(np.sum(F(np.array([-1.0, 1.0]))))
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    a = (d - 3) / 2
    return sphere_area(d - 1) * gauss_jacobi(n, a, a).integrate(F)


def mc_sphere(d: int, n: int, seed: int) -> np.ndarray:
    """n i.i.d. uniform points on S^{d-1}, shape (n, d); reproducible from ``seed``."""
    if n < 1:
        raise DomainError(f"need n >= 1 samples, got {n}")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def random_orthonormal_frame(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random rotation of R^d as a (d, d) orthogonal matrix."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))
