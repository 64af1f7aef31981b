"""Closed-form constants for the weighted torus inequalities and the
derived two-sided brackets for the discrete sharp constants.

Three families of inequality constants share the letters C1/C2 in the
source material with different formulas; they are namespaced here as
``hardy_c1c2`` (gradient vs omega-weighted mass), ``hr_c1c2`` (Laplacian vs
omega-weighted gradient) and ``rellich_c1c2`` (Laplacian vs mass).

Everything reachable by rational operations (the H and HR families and the
k = 0 bracket lower bounds) is computed in exact rational arithmetic with
``fractions.Fraction`` and converted to float at the public boundary; the
``_exact`` variants expose the rationals directly.  The R family needs one
square root and is evaluated in double precision.

Each constant enforces the validity domain of its inequality exactly:
strict ``d > -2k+2`` (weighted Hardy), non-strict ``d >= -6k+8`` (weighted
Hardy-Rellich), strict ``d > -2k+4`` (weighted Rellich).  One deliberate
exception is documented at ``weighted_rellich_constant``: its internal HR
factor is the algebraic formula, which is well defined on all of
``d > -2k+4`` even where the HR inequality itself asserts nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "BoundBracket",
    "hardy_c1c2",
    "hardy_c1c2_exact",
    "hr_c1c2",
    "hr_c1c2_exact",
    "weighted_hardy_constant",
    "weighted_hardy_constant_exact",
    "weighted_hardy_rellich_constant",
    "weighted_hardy_rellich_constant_exact",
    "rellich_beta",
    "rellich_c1c2",
    "weighted_rellich_constant",
    "higher_order_constants",
    "discrete_bound_bracket",
]


def _check_dim(d) -> int:
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    return d


def _check_nonpositive_k(k) -> int:
    if not isinstance(k, int) or isinstance(k, bool) or k > 0:
        raise DomainError(f"weight exponent k must be a non-positive integer, got {k!r}")
    return k


def _check_half_integer_alpha(alpha) -> Fraction:
    a = Fraction(alpha).limit_denominator(2)
    if a != Fraction(alpha) or a > 0:
        raise DomainError(
            f"alpha must be a half-integer <= 0, got {alpha!r}")
    return a


# -- weighted Hardy family ----------------------------------------------


def hardy_c1c2_exact(k: int, d: int) -> tuple[Fraction, Fraction]:
    """C1, C2 of the weighted Hardy step: 16/(d+2k-2)^2 and
    (3d+2k-2)/(d(d+2k-2)), valid for d > -2k+2."""
    k = _check_nonpositive_k(k)
    d = _check_dim(d)
    if not d > -2 * k + 2:
        raise DomainError(f"requires d > -2k+2 = {-2 * k + 2}, got d = {d}")
    c1 = Fraction(16, (d + 2 * k - 2) ** 2)
    c2 = Fraction(3 * d + 2 * k - 2, d * (d + 2 * k - 2))
    return c1, c2


def hardy_c1c2(k: int, d: int) -> tuple[float, float]:
    c1, c2 = hardy_c1c2_exact(k, d)
    return float(c1), float(c2)


def _chain_inverse(c1c2_exact, k: int, d: int) -> Fraction:
    """The finite sum/product  sum_{j=0}^{-k} d^j C1(k+j) prod_{i<j} C2(k+i)
    + d^{-k} prod_{i=0}^{-k} C2(k+i)  shared by the H and HR families."""
    total = Fraction(0)
    prefix = Fraction(1)  # prod_{i=0}^{j-1} C2(k+i, d)
    for j in range(0, -k + 1):
        c1, c2 = c1c2_exact(k + j, d)
        total += Fraction(d) ** j * c1 * prefix
        prefix *= c2
    # prefix is now prod_{i=0}^{-k} C2(k+i, d)
    return total + Fraction(d) ** (-k) * prefix


def weighted_hardy_constant_exact(k: int, d: int) -> Fraction:
    """H(k, d): gradient form with weight omega^k dominates H(k,d) times the
    mass with weight omega^{k-1}; valid for d > -2k+2."""
    inv = _chain_inverse(hardy_c1c2_exact, _check_nonpositive_k(k), _check_dim(d))
    return 1 / inv


def weighted_hardy_constant(k: int, d: int) -> float:
    return float(weighted_hardy_constant_exact(k, d))


# -- weighted Hardy-Rellich family ---------------------------------------


def _hr_c1c2_formula(k: int, d: int) -> tuple[Fraction, Fraction]:
    """The HR C1/C2 formulas without the validity-domain gate.  For k <= 0
    both denominators d - 2(k+j) are >= d > 0, so the formulas are positive
    on every dimension."""
    c1 = Fraction(16, (d - 2 * k) ** 2)
    c2 = Fraction(3 * d - 2 * k + 4, d * (d - 2 * k))
    return c1, c2


def _hr_threshold(k: int) -> int:
    return -6 * k + 8


def hr_c1c2_exact(k: int, d: int) -> tuple[Fraction, Fraction]:
    """C1, C2 of the weighted Hardy-Rellich step: 16/(d-2k)^2 and
    (3d-2k+4)/(d(d-2k)), stated for d >= -6k+8."""
    k = _check_nonpositive_k(k)
    d = _check_dim(d)
    if not d >= _hr_threshold(k):
        raise DomainError(f"requires d >= -6k+8 = {_hr_threshold(k)}, got d = {d}")
    return _hr_c1c2_formula(k, d)


def hr_c1c2(k: int, d: int) -> tuple[float, float]:
    c1, c2 = hr_c1c2_exact(k, d)
    return float(c1), float(c2)


def _hr_inverse_formula(k: int, d: int) -> Fraction:
    return _chain_inverse(_hr_c1c2_formula, k, d)


def weighted_hardy_rellich_constant_exact(k: int, d: int) -> Fraction:
    """HR(k, d): Laplacian form with weight omega^k dominates HR(k,d) times
    the gradient form with weight omega^{k-1}; valid for d >= -6k+8."""
    k = _check_nonpositive_k(k)
    d = _check_dim(d)
    if not d >= _hr_threshold(k):
        raise DomainError(f"requires d >= -6k+8 = {_hr_threshold(k)}, got d = {d}")
    return 1 / _hr_inverse_formula(k, d)


def weighted_hardy_rellich_constant(k: int, d: int) -> float:
    return float(weighted_hardy_rellich_constant_exact(k, d))


# -- weighted Rellich family ----------------------------------------------


def rellich_beta(alpha, d: int) -> tuple[float, float]:
    """The auxiliary pair (beta, gamma) of the weighted Rellich constant:

        beta  = (-4 + 8 alpha + sqrt(2) sqrt(d^2 - 4d + 16 alpha^2 - 16 alpha + 8)) / 8
        gamma = beta (d + 4 beta - 4 alpha) / 2

    for half-integer alpha <= 0 and d > -4 alpha + 4.  On that domain
    beta >= 0, gamma >= 0 and beta^2 - beta(2 alpha - 1) >= 0.
    """
    a = _check_half_integer_alpha(alpha)
    d = _check_dim(d)
    if not d > -4 * a + 4:
        raise DomainError(f"requires d > -4*alpha+4 = {-4 * a + 4}, got d = {d}")
    af = float(a)
    disc = d * d - 4.0 * d + 16.0 * af * af - 16.0 * af + 8.0
    if disc < 0:
        raise ArithmeticError(
            "negative discriminant in beta; cannot occur on the valid domain")
    beta = (-4.0 + 8.0 * af + math.sqrt(2.0) * math.sqrt(disc)) / 8.0
    if beta < 0:
        raise ArithmeticError("beta must be non-negative on the valid domain")
    gamma = beta * (d + 4.0 * beta - 4.0 * af) / 2.0
    return beta, gamma


def rellich_c1c2(alpha, d: int) -> tuple[float, float]:
    """C1, C2 of the weighted Rellich step at half-integer alpha <= 0:

        C1 = 2 beta (d - 2 beta + 2 alpha - 1) / d
        C2 = beta (d + 4 beta - 4 alpha)(d + 2 alpha - 2)(2 beta - 2 alpha + 1) / (2d)

    An equivalent form of C2 is gamma (d + 2 alpha - 2)
    (2 beta - 2 alpha + 1) / d with the gamma returned by ``rellich_beta``;
    both forms are evaluated and cross-checked.
    """
    a = float(_check_half_integer_alpha(alpha))
    beta, gamma = rellich_beta(alpha, d)
    c1 = 2.0 * beta * (d - 2.0 * beta + 2.0 * a - 1.0) / d
    c2 = beta * (d + 4.0 * beta - 4.0 * a) * (d + 2.0 * a - 2.0) \
        * (2.0 * beta - 2.0 * a + 1.0) / (2.0 * d)
    c2_gamma_form = gamma * (d + 2.0 * a - 2.0) * (2.0 * beta - 2.0 * a + 1.0) / d
    if abs(c2 - c2_gamma_form) > 1e-12 * max(1.0, abs(c2)):
        raise ArithmeticError("the two printed forms of C2 disagree")
    return c1, c2


def weighted_rellich_constant(k: int, d: int) -> float:
    """R(k, d): Laplacian form with weight omega^k dominates R(k,d) times
    the mass with weight omega^{k-2}, for d > -2k+4:

        R(k,d) = (d-2k)^2 (d+2k-4)^2 /
                 (256 (1 + HR(k,d)^{-1} (d C1(k/2,d) + d C2(k/2,d) H(k,d)^{-1})))

    The H and HR factors are the algebraic sum/product formulas; for
    -2k+4 < d < -6k+8 the HR formula is evaluated outside the HR
    inequality's own hypothesis (it stays positive there), which is exactly
    how the composed constant is defined.
    """
    k = _check_nonpositive_k(k)
    d = _check_dim(d)
    if not d > -2 * k + 4:
        raise DomainError(f"requires d > -2k+4 = {-2 * k + 4}, got d = {d}")
    alpha = Fraction(k, 2)
    c1, c2 = rellich_c1c2(alpha, d)
    h_inv = float(_chain_inverse(hardy_c1c2_exact, k, d))
    hr_inv = float(_hr_inverse_formula(k, d))
    denom = 1.0 + hr_inv * (d * c1 + d * c2 * h_inv)
    value = (d - 2 * k) ** 2 * (d + 2 * k - 4) ** 2 / (256.0 * denom)
    if value <= 0:
        raise ArithmeticError("R(k,d) must be positive on its domain")
    return value


# -- higher-order compositions -------------------------------------------


def _higher_c(m: int, k: int, d: int) -> float:
    """C(m,k,d) = prod_{i=0}^{m-1} R(k-2i, d), for d > -2k+4m."""
    if not d > -2 * k + 4 * m:
        raise DomainError(f"requires d > -2k+4m = {-2 * k + 4 * m}, got d = {d}")
    value = 1.0
    for i in range(m):
        value *= weighted_rellich_constant(k - 2 * i, d)
    return value


def _higher_ctilde(m: int, k: int, d: int) -> float:
    """C~(m,k,d) = H(k,d) prod_{i=0}^{m-1} R(k-2i-1, d), for d > -2k+4m+2."""
    if not d > -2 * k + 4 * m + 2:
        raise DomainError(
            f"requires d > -2k+4m+2 = {-2 * k + 4 * m + 2}, got d = {d}")
    value = float(weighted_hardy_constant_exact(k, d))
    for i in range(m):
        value *= weighted_rellich_constant(k - 2 * i - 1, d)
    return value


def higher_order_constants(m: int, k: int, d: int) -> tuple[float, float]:
    """The pair (C(m,k,d), C~(m,k,d)) of higher-order composition constants.

    Empty products are 1, so (C, C~) = (1, H(k,d)) at m = 0.  Requires
    d > -2k+4m for C and d > -2k+4m+2 for C~ (both enforced, since both
    members are returned).
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise DomainError(f"m must be a non-negative integer, got {m!r}")
    k = _check_nonpositive_k(k)
    d = _check_dim(d)
    return _higher_c(m, k, d), _higher_ctilde(m, k, d)


# -- discrete brackets ----------------------------------------------------


@dataclass(frozen=True)
class BoundBracket:
    """Validated lower/upper bounds for a discrete sharp constant."""

    kind: str
    k: int
    d: int
    lower: float
    upper: float

    def __post_init__(self):
        if not 0 < self.lower <= self.upper:
            raise ArithmeticError(
                f"bracket must satisfy 0 < lower <= upper, got {self}")

    def contains(self, value: float, rel_tol: float = 0.0) -> bool:
        slack_lo = self.lower * (1.0 - rel_tol)
        slack_hi = self.upper * (1.0 + rel_tol)
        return slack_lo <= value <= slack_hi


def discrete_bound_bracket(k: int, d: int, kind: str) -> BoundBracket:
    """Two-sided bracket for the discrete sharp constant of order k.

    hardy  (k >= 0, d > 4k+2): lower 4^{2k+1} C~(k,0,d), upper 4^{2k+1} d^{2k+1}
    rellich(k >= 1, d > 4k):   lower 4^{2k}   C(k,0,d),  upper 4^{2k}   d^{2k}

    The upper bounds are the Rayleigh quotients of the unit-sphere
    indicator; the lower bounds come through the lattice-torus transfer of
    the composed torus constants.
    """
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise DomainError(f"order k must be a non-negative integer, got {k!r}")
    d = _check_dim(d)
    if kind == "hardy":
        if not d > 4 * k + 2:
            raise DomainError(f"requires d > 4k+2 = {4 * k + 2}, got d = {d}")
        lower = 4.0 ** (2 * k + 1) * _higher_ctilde(k, 0, d)
        upper = 4.0 ** (2 * k + 1) * float(d) ** (2 * k + 1)
    elif kind == "rellich":
        if k < 1:
            raise DomainError("rellich bracket requires order k >= 1")
        if not d > 4 * k:
            raise DomainError(f"requires d > 4k = {4 * k}, got d = {d}")
        lower = 4.0 ** (2 * k) * _higher_c(k, 0, d)
        upper = 4.0 ** (2 * k) * float(d) ** (2 * k)
    else:
        raise DomainError(f"kind must be 'hardy' or 'rellich', got {kind!r}")
    return BoundBracket(kind=kind, k=k, d=d, lower=lower, upper=upper)
