"""Closed-form sharp constants as functions of (beta, d).

Each constant ``X`` has a companion ``log_X``; Gamma ratios are always
formed in log space.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateConfigurationError, DomainError
from .numerics import log_gamma

LOG2 = math.log(2.0)
LOGPI = math.log(math.pi)


def _require(cond: bool, msg: str, beta: float, d: int) -> None:
    if not cond:
        raise DomainError(f"{msg} (d={d}, beta={beta})")


def log_W(beta: float, d: int) -> float:
    _require(beta > (1 - d) / 4, "beta must exceed (1-d)/4", beta, d)
    return (
        (1 - 5 * d + 4 * beta) / 2 * LOG2
        + (1 - 5 * d) / 2 * LOGPI
        + log_gamma((d - 1) / 2 + 2 * beta)
        - log_gamma(d - 1 + 2 * beta)
    )


def W(beta: float, d: int) -> float:
    """Sharp constant of the (+-) estimate."""
    return math.exp(log_W(beta, d))


def W0_duplication(d: int) -> float:
    """W(0, d) in the duplication-formula form 2^{(5-7d)/2} pi^{(2-5d)/2} / Gamma(d/2)."""
    return math.exp((5 - 7 * d) / 2 * LOG2 + (2 - 5 * d) / 2 * LOGPI - log_gamma(d / 2))


def log_W_pp(beta: float, d: int) -> float:
    return (5 - 7 * d + 4 * beta) / 2 * LOG2 + (2 - 5 * d) / 2 * LOGPI - log_gamma(d / 2)


def W_pp(beta: float, d: int) -> float:
    """Constant of the (++) estimate; sharp for beta > (2-d)/2."""
    return math.exp(log_W_pp(beta, d))


def log_C_radial(beta: float, d: int) -> float:
    beta_d = max((1 - d) / 4, (2 - d) / 2)
    _require(beta > beta_d, "beta must exceed beta_d = max((1-d)/4, (2-d)/2)", beta, d)
    return (
        (d - 3 + 4 * beta) * LOG2
        + log_gamma(d / 2)
        + log_gamma((d - 1) / 2 + 2 * beta)
        - d / 2 * LOGPI
        - math.log(d - 2 + 2 * beta)
        - log_gamma((3 * d - 5) / 2 + 2 * beta)
    )


def C_radial(beta: float, d: int) -> float:
    return math.exp(log_C_radial(beta, d))


def log_C_radial_pp(beta: float, d: int) -> float:
    _require(beta > (2 - d) / 2, "beta must exceed (2-d)/2", beta, d)
    return (
        (4 * beta - 1) * LOG2
        + (1 - d) / 2 * LOGPI
        + log_gamma(d - 2 + 2 * beta)
        - log_gamma((3 * d - 5) / 2 + 2 * beta)
    )


def C_radial_pp(beta: float, d: int) -> float:
    return math.exp(log_C_radial_pp(beta, d))


def log_radial_factor(beta: float, d: int) -> float:
    _require(beta > (2 - d) / 2, "beta must exceed (2-d)/2", beta, d)
    return (
        (7 * (d - 1) / 2 + 2 * beta) * LOG2
        + (4 * d - 1) / 2 * LOGPI
        + log_gamma(d / 2)
        + log_gamma(d - 2 + 2 * beta)
        - log_gamma((3 * d - 5) / 2 + 2 * beta)
    )


def radial_factor(beta: float, d: int) -> float:
    """I_beta(f, g) / (||f||^2 ||g||^2) for radial f, g, norms of order (d-1)/4 + beta."""
    return math.exp(log_radial_factor(beta, d))


def log_lemma31_prefactor(beta: float, d: int) -> float:
    _require(beta > (1 - d) / 4, "beta must exceed (1-d)/4", beta, d)
    return (d - 1) / 2 * math.log(2 * math.pi) + log_gamma((d - 1) / 2 + 2 * beta) - log_gamma(d - 1 + 2 * beta)


def lemma31_closed_form(y1, y2, beta: float, d: int) -> float:
    """Closed form of the delta-constrained integral I_beta(y1, y2)."""
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    n1, n2 = np.linalg.norm(y1), np.linalg.norm(y2)
    if n1 == 0 or n2 == 0:
        raise DomainError("y1 and y2 must be nonzero")
    expo = (d - 3) / 2 + 2 * beta
    q = n1 * n2 - float(y1 @ y2)
    if q <= 1e-14 * n1 * n2:
        if expo > 0:
            return 0.0
        raise DegenerateConfigurationError(
            f"y1 parallel to y2 with exponent {expo:g} <= 0: value is not finite"
        )
    return math.exp(log_lemma31_prefactor(beta, d) + expo * math.log(q))


def log_hls_constant(lam: float, d: int) -> float:
    if not 0 < lam < d - 1:
        raise DomainError(f"HLS exponent must lie in (0, d-1), got lambda={lam} for d={d}")
    n = d - 1
    return (
        lam / 2 * LOGPI
        + log_gamma((n - lam) / 2)
        - log_gamma(n - lam / 2)
        + (1 - lam / n) * (log_gamma(n) - log_gamma(n / 2))
    )


def hls_constant(lam: float, d: int) -> float:
    """Sharp constant of the Hardy-Littlewood-Sobolev inequality on S^{d-1}."""
    return math.exp(log_hls_constant(lam, d))


def log_lemma21_constant(beta: float, d: int) -> float:
    lam = 3 - d - 4 * beta
    if not -2 <= lam < 0:
        raise DomainError(f"need lambda = 3-d-4beta in [-2, 0), got {lam:g} (d={d}, beta={beta})")
    return (
        (2 * d - 5 + 4 * beta) * LOG2
        - 0.5 * LOGPI
        + log_gamma(d - 2 + 2 * beta)
        + log_gamma(d / 2)
        - log_gamma((3 * d - 5) / 2 + 2 * beta)
    )


def lemma21_constant(beta: float, d: int) -> float:
    """Bound H_lambda(g, g) <= const * |int g|^2 for lambda in [-2, 0)."""
    return math.exp(log_lemma21_constant(beta, d))


def constant_table(beta: float, d: int) -> dict[str, float | None]:
    """All constants at (beta, d); entries outside their admissible range are None."""
    lam = 3 - d - 4 * beta
    entries = {
        "W": lambda: W(beta, d),
        "W_pp": lambda: W_pp(beta, d),
        "C": lambda: C_radial(beta, d),
        "C_pp": lambda: C_radial_pp(beta, d),
        "radial_factor": lambda: radial_factor(beta, d),
        "lemma31_prefactor": lambda: math.exp(log_lemma31_prefactor(beta, d)),
        "hls_constant": lambda: hls_constant(lam, d),
        "lemma21_constant": lambda: lemma21_constant(beta, d),
    }
    out: dict[str, float | None] = {}
    for name, fn in entries.items():
        try:
            out[name] = fn()
        except DomainError:
            out[name] = None
    return out
