"""Problem setting, Fourier-side data and the half-wave split.

Fourier convention: f^(xi) = int e^{-i x.xi} f(x) dx, so that
int |f^|^2 = (2 pi)^d int |f|^2. Every norm here is computed on the
Fourier side with the explicit (2 pi)^{-d}.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import AccuracyError, DomainError, UnsupportedDataError
from .numerics import exp_sinh_rule, integrate_semiline, sphere_area, sphere_integrate_zonal


@dataclass(frozen=True)
class Setting:
    d: int
    beta: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.d!r}")

    @property
    def beta_d(self) -> float:
        return max((1 - self.d) / 4, (2 - self.d) / 2)

    @property
    def admissible_inequality(self) -> bool:
        return self.beta > (1 - self.d) / 4

    @property
    def admissible_sharp(self) -> bool:
        return self.beta > self.beta_d

    @property
    def admissible_sharp_pp(self) -> bool:
        return self.beta > (2 - self.d) / 2

    @property
    def lam(self) -> float:
        """Riesz exponent 3 - d - 4 beta of the sphere pairing."""
        return 3 - self.d - 4 * self.beta

    @property
    def p(self) -> float:
        return 2 * (self.d - 1) / (3 * self.d - 5 + 4 * self.beta)

    @property
    def sobolev_exponent(self) -> float:
        return (self.d - 1) / 4 + self.beta

    @property
    def radial_power(self) -> float:
        """Power of r in the integrand of T_beta: (3d-3)/2 + 2 beta."""
        return (3 * self.d - 3) / 2 + 2 * self.beta

    @property
    def angular_power(self) -> float:
        """Exponent (d-3)/2 + 2 beta of (1 - y1'.y2')."""
        return (self.d - 3) / 2 + 2 * self.beta

    def require(self, flag: str) -> None:
        messages = {
            "admissible_inequality": "beta must exceed (1-d)/4",
            "admissible_sharp": "beta must exceed beta_d = max((1-d)/4, (2-d)/2)",
            "admissible_sharp_pp": "beta must exceed (2-d)/2",
        }
        if not getattr(self, flag):
            raise DomainError(f"{messages[flag]} (d={self.d}, beta={self.beta})")


@dataclass(frozen=True)
class MinkowskiVector:
    t: float
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))

    @property
    def quadratic_form(self) -> float:
        """Q(t, x) = t^2 - |x|^2."""
        return self.t**2 - float(self.x @ self.x)

    def as_array(self) -> np.ndarray:
        return np.concatenate([[self.t], self.x])

    @classmethod
    def from_array(cls, a) -> "MinkowskiVector":
        a = np.asarray(a, dtype=float)
        return cls(float(a[0]), a[1:])


@dataclass(frozen=True)
class ExtremiserParams:
    """f^(xi) = lam * exp(a|xi| + b.xi + c) / |xi| with Re a < 0, |Re b| < -Re a."""

    a: complex
    b: tuple
    c: complex = 0.0
    lam: complex = 1.0

    def __post_init__(self):
        b = tuple(complex(v) for v in np.atleast_1d(np.asarray(self.b, dtype=complex)))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "lam", complex(self.lam))
        if not self.a.real < 0:
            raise DomainError(f"extremiser needs Re a < 0, got a={self.a}")
        if not np.linalg.norm(self.re_b) < -self.a.real:
            raise DomainError("extremiser needs |Re b| < -Re a")

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def b_vec(self) -> np.ndarray:
        return np.array(self.b, dtype=complex)

    @property
    def re_b(self) -> np.ndarray:
        return np.array([v.real for v in self.b])

    @property
    def zeta(self) -> np.ndarray:
        """Re b / Re a, the tilt vector of T_beta f (|zeta| < 1)."""
        return self.re_b / self.a.real

    @property
    def has_radial_modulus(self) -> bool:
        return not np.any(self.re_b)

    @property
    def is_radial(self) -> bool:
        return not any(self.b)

    def __call__(self, xi) -> np.ndarray:
        return extremiser_eval(self, xi)

    def modulus_sq(self, r, omega_dot_axis) -> np.ndarray:
        """|f^(r w)|^2 with w . (Re b / |Re b|) = omega_dot_axis."""
        rb = float(np.linalg.norm(self.re_b))
        expo = 2 * (self.a.real + rb * np.asarray(omega_dot_axis)) * r + 2 * self.c.real
        return abs(self.lam) ** 2 * np.exp(expo) / np.asarray(r) ** 2

    @property
    def axis(self) -> np.ndarray:
        rb = self.re_b
        n = np.linalg.norm(rb)
        if n == 0:
            e = np.zeros(self.d)
            e[0] = 1.0
            return e
        return rb / n


def extremiser_eval(p: ExtremiserParams, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != p.d:
        raise DomainError(f"expected vectors in R^{p.d}, got shape {xi.shape}")
    r = np.linalg.norm(xi, axis=-1)
    if np.any(r == 0):
        raise DomainError("extremiser profile is singular at xi = 0")
    return p.lam * np.exp(p.a * r + xi @ p.b_vec + p.c) / r


@dataclass(frozen=True)
class RadialData:
    """f^(xi) = profile(|xi|).

    ``sing_order`` s declares |profile(r)| ~ r^{-s} as r -> 0 and ``decay``
    the exponential rate of |profile| at infinity; both steer quadrature.
    """

    profile: Callable[[np.ndarray], np.ndarray]
    sing_order: float = 0.0
    decay: float = 1.0
    label: str = "radial"

    def __call__(self, xi) -> np.ndarray:
        return self.profile(np.linalg.norm(np.asarray(xi, dtype=float), axis=-1))

    def scaled(self, mu: float) -> "RadialData":
        """The dilate r -> profile(r / mu)."""
        prof = self.profile
        return RadialData(lambda r: prof(r / mu), self.sing_order, self.decay / mu, f"{self.label}/{mu:g}")

    def times(self, k: complex) -> "RadialData":
        prof = self.profile
        return RadialData(lambda r: k * prof(r), self.sing_order, self.decay, f"{k}*{self.label}")


@dataclass(frozen=True)
class GenericData:
    """Evaluable Fourier-side data with no quadrature metadata."""

    func: Callable[[np.ndarray], np.ndarray]
    label: str = "generic"

    def __call__(self, xi) -> np.ndarray:
        return self.func(np.asarray(xi, dtype=float))


FourierData = Union[RadialData, ExtremiserParams, GenericData]


def as_radial(data: FourierData) -> RadialData | None:
    """RadialData view of ``data`` if f^ is a function of |xi| alone, else None."""
    if isinstance(data, RadialData):
        return data
    if isinstance(data, ExtremiserParams) and data.is_radial:
        a, c, lam = data.a, data.c, data.lam
        return RadialData(
            lambda r: lam * np.exp(a * r + c) / r,
            sing_order=1.0,
            decay=-a.real,
            label=f"extremiser(a={a:g})",
        )
    return None


def require_radial(data: FourierData) -> RadialData:
    rad = as_radial(data)
    if rad is None:
        raise UnsupportedDataError(f"radial data required, got {type(data).__name__}")
    return rad


def radial_moment(data: RadialData, power: float) -> float:
    """int_0^inf |profile(r)|^2 r^power dr."""
    s = 2 * data.sing_order - power
    if s >= 1:
        raise AccuracyError(
            f"integral of |profile|^2 r^{power:g} diverges at the endpoint r = 0"
        )
    prof = data.profile
    return integrate_semiline(
        lambda r: np.abs(prof(r)) ** 2 * r**power, sing_order=max(s, 0.0), decay_hint=2 * data.decay
    )


def extremiser_radial_moment(p: ExtremiserParams, power: float, t: np.ndarray, step: float = 1 / 32) -> np.ndarray:
    """int_0^inf |f^(r w)|^2 r^power dr by quadrature, as a function of t = w . axis."""
    s = 2 - power
    if s >= 1:
        raise AccuracyError(f"extremiser moment r^{power:g} diverges at the endpoint r = 0")
    t = np.asarray(t, dtype=float)
    rate = 2 * (-p.a.real - np.linalg.norm(p.re_b) * t)
    rule = exp_sinh_rule(step, 1.0, max(s, 0.0))
    # node x = rate * r turns every t into the same e^{-x} problem
    x = rule.nodes
    r = x[None, :] / rate.reshape(-1, 1)
    vals = p.modulus_sq(r, t.reshape(-1, 1)) * r**power
    return (vals @ rule.weights / rate.reshape(-1)).reshape(t.shape)


def sobolev_norm_sq(data: FourierData, s: float, setting: Setting, n: int = 64) -> float:
    """||f||^2 in the homogeneous Sobolev space of order s: (2 pi)^{-d} int |f^|^2 |xi|^{2s}."""
    d = setting.d
    pref = (2 * math.pi) ** (-d)
    rad = as_radial(data)
    if rad is not None:
        return pref * sphere_area(d) * radial_moment(rad, 2 * s + d - 1)
    if isinstance(data, ExtremiserParams):
        if data.d != d:
            raise DomainError(f"data lives in R^{data.d}, setting has d={d}")
        power = 2 * s + d - 1
        return pref * sphere_integrate_zonal(d, lambda t: extremiser_radial_moment(data, power, t), n)
    raise UnsupportedDataError("Sobolev norm needs radial or extremiser data")


def wave_split(u0_hat: FourierData, u1_hat: FourierData) -> tuple[FourierData, FourierData]:
    """f^_pm = (u0^ -+ i u1^/|xi|) / 2, so that u = e^{itD} f_+ + e^{-itD} f_-."""
    r0, r1 = as_radial(u0_hat), as_radial(u1_hat)
    if r0 is not None and r1 is not None:
        p0, p1 = r0.profile, r1.profile
        sing = max(r0.sing_order, r1.sing_order + 1)
        decay = min(r0.decay, r1.decay)
        plus = RadialData(lambda r: 0.5 * (p0(r) - 1j * p1(r) / r), sing, decay, "f+")
        minus = RadialData(lambda r: 0.5 * (p0(r) + 1j * p1(r) / r), sing, decay, "f-")
        return plus, minus

    def half(sign):
        def func(xi):
            r = np.linalg.norm(xi, axis=-1)
            return 0.5 * (u0_hat(xi) - sign * 1j * u1_hat(xi) / r)

        return func

    return GenericData(half(+1), "f+"), GenericData(half(-1), "f-")


# -- named presets -----------------------------------------------------------

_EXTREMISER_RE = re.compile(r"^extremiser\(([^)]*)\)$")
_PROP13_RE = re.compile(r"^prop13\(([^)]*)\)$")


def gaussian() -> RadialData:
    return RadialData(lambda r: np.exp(-r * r), sing_order=0.0, decay=1.0, label="gaussian")


def preset(name: str, d: int) -> FourierData:
    """Data presets addressable by name: foschi, gaussian, extremiser(a,b1,c), prop13(delta)."""
    name = name.replace(" ", "")
    if name == "foschi":
        return ExtremiserParams(-1.0, np.zeros(d))
    if name == "gaussian":
        return gaussian()
    m = _EXTREMISER_RE.match(name)
    if m:
        parts = [complex(v) for v in m.group(1).split(",")]
        if len(parts) != 3:
            raise DomainError("extremiser preset takes three arguments: extremiser(a,b1,c)")
        a, b1, c = parts
        b = np.zeros(d, dtype=complex)
        b[0] = b1
        return ExtremiserParams(a, b, c)
    m = _PROP13_RE.match(name)
    if m:
        delta = float(m.group(1))
        if not 0 < delta < 1:
            raise DomainError("prop13 needs 0 < delta < 1")
        b = np.zeros(d)
        b[0] = 1 - delta
        return ExtremiserParams(-1.0, b)
    raise DomainError(f"unknown data preset {name!r}")
