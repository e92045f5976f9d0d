#!/usr/bin/env python3
"""
Binomial weight sequences c_alpha(n) and the weighted coefficient norms

c_alpha(n) is the n-th coefficient of (1 - z)^(-alpha). The weights define
the A^2_alpha coefficient norm sqrt(sum |a_n|^2 / c_alpha(n)) and the
D_beta norm sqrt(sum |a_n|^2 c_beta(n)). Everything here is exact finite
arithmetic; no quadrature is involved.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.errors import DomainError

# Desk-scale polynomials never come close to this
MAX_WEIGHT_INDEX = 2 ** 16


@dataclass(frozen=True)
class WeightSequence:
    """Binomial weights c_alpha(0..N)"""

    alpha: float
    values: Tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> float:
        return self.values[n]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _check_exponent(alpha: float, name: str = "alpha") -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha < 1.0:
        raise DomainError(f"{name} must be a finite real >= 1, got {alpha}")
    return alpha


def binomial_weights(alpha: float, n_max: int) -> WeightSequence:
    """
    Compute c_alpha(0..n_max) by the ratio recurrence.

    values[n] = values[n-1] * (n + alpha - 1) / n, values[0] = 1.

    Args:
        alpha: Exponent, alpha >= 1 (non-integer values are fine)
        n_max: Largest index, 0 <= n_max <= 2^16

    Returns:
        WeightSequence with n_max + 1 entries

    Raises:
        DomainError: alpha < 1, n_max out of range, or the weights overflow
    """
    alpha = _check_exponent(alpha)
    if int(n_max) != n_max or n_max < 0:
        raise DomainError(f"n_max must be a nonnegative integer, got {n_max}")
    n_max = int(n_max)
    if n_max > MAX_WEIGHT_INDEX:
        raise DomainError(f"n_max={n_max} exceeds the cap {MAX_WEIGHT_INDEX}")

    weights = _weight_array(alpha, n_max)
    if not np.all(np.isfinite(weights)):
        raise DomainError(f"binomial weights overflow for alpha={alpha}, n_max={n_max}")
    return WeightSequence(alpha=alpha, values=tuple(float(v) for v in weights))


def _weight_array(alpha: float, n_max: int) -> np.ndarray:
    n = np.arange(1, n_max + 1, dtype=float)
    ratios = (n + alpha - 1.0) / n
    with np.errstate(over="ignore"):
        return np.concatenate(([1.0], np.cumprod(ratios)))


def coefficient_bergman_norm(f, alpha: float) -> float:
    """
    A^2_alpha norm from the coefficients: sqrt(sum |a_n|^2 / c_alpha(n)).

    Args:
        f: AnalyticPolynomial (anything with a `coeffs` array)
        alpha: Exponent >= 1; alpha = 1 gives the plain l2 norm
    """
    alpha = _check_exponent(alpha)
    coeffs = np.asarray(f.coeffs, dtype=complex)
    if coeffs.size == 0:
        return 0.0
    weights = binomial_weights(alpha, coeffs.size - 1).as_array()
    return float(math.sqrt(np.sum(np.abs(coeffs) ** 2 / weights)))


def weighted_dirichlet_norm(f, beta: float) -> float:
    """
    D_beta norm from the coefficients: sqrt(sum |a_n|^2 c_beta(n)).

    Args:
        f: AnalyticPolynomial
        beta: Exponent >= 1
    """
    beta = _check_exponent(beta, "beta")
    coeffs = np.asarray(f.coeffs, dtype=complex)
    if coeffs.size == 0:
        return 0.0
    weights = binomial_weights(beta, coeffs.size - 1).as_array()
    return float(math.sqrt(np.sum(np.abs(coeffs) ** 2 * weights)))


def vandermonde_residual(alpha: float, beta: float, n_max: int) -> float:
    """
    Largest relative residual of c_{alpha+beta}(n) = sum_k c_alpha(k) c_beta(n-k), n <= n_max.
    """
    left = binomial_weights(alpha, n_max).as_array()
    right = binomial_weights(beta, n_max).as_array()
    total = binomial_weights(alpha + beta, n_max).as_array()
    convolved = np.convolve(left, right)[: n_max + 1]
    return float(np.max(np.abs(convolved - total) / total))


def submultiplicative_gap(beta: float, n1: int, n2: int) -> float:
    """
    c_beta(n1) c_beta(n2) - c_beta(n1 + n2); nonnegative whenever beta >= 1.
    """
    weights = binomial_weights(beta, n1 + n2)
    return weights[n1] * weights[n2] - weights[n1 + n2]

