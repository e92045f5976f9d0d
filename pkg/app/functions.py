#!/usr/bin/env python3
"""
Function objects for the lab: analytic polynomials, trigonometric
polynomials on the circle, and Moebius pullbacks of analytic polynomials.

All evaluation is Horner's rule (numpy.polyval) and works on scalars and
numpy arrays alike, so quadrature and root scans can evaluate a whole node
set in one call.
"""

import math
from typing import Iterable, Union

import numpy as np

from app.errors import DomainError

ArrayLike = Union[complex, float, np.ndarray]

# Points with |z| up to 1 + this are accepted as "on the circle"
CIRCLE_SLACK = 1e-12


def _as_coeff_array(coeffs: Iterable[complex]) -> np.ndarray:
    array = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=complex).ravel()
    array.setflags(write=False)
    return array


class AnalyticPolynomial:
    """
    f(z) = sum_{n=0}^{N} a_n z^n with complex coefficients.

    The coefficient array is stored as given (trailing zeros included) so file
    round trips are exact; `degree` looks at the largest nonzero coefficient.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        self._coeffs = _as_coeff_array(coeffs)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Largest index with a nonzero coefficient; -1 for the zero polynomial"""
        nonzero = np.flatnonzero(self._coeffs)
        return int(nonzero[-1]) if nonzero.size else -1

    def is_zero(self) -> bool:
        return self.degree < 0

    def evaluate(self, z: ArrayLike) -> ArrayLike:
        if self._coeffs.size == 0:
            return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
        return np.polyval(self._coeffs[::-1], z)

    __call__ = evaluate

    def l2_norm(self) -> float:
        """Coefficient l2 norm, which is the H^2 norm by Parseval"""
        return float(np.sqrt(np.sum(np.abs(self._coeffs) ** 2)))

    def scale(self, factor: complex) -> "AnalyticPolynomial":
        return AnalyticPolynomial(self._coeffs * factor)

    def normalized(self) -> "AnalyticPolynomial":
        norm = self.l2_norm()
        if norm == 0.0:
            raise DomainError("cannot normalize the zero polynomial")
        return self.scale(1.0 / norm)

    def trimmed(self) -> "AnalyticPolynomial":
        return AnalyticPolynomial(self._coeffs[: self.degree + 1])

    def power(self, k: int) -> "AnalyticPolynomial":
        """f^k by repeated multiplication"""
        if k < 0 or int(k) != k:
            raise DomainError(f"power must be a nonnegative integer, got {k}")
        result = AnalyticPolynomial([1.0])
        for _ in range(int(k)):
            result = multiply(result, self)
        return result

    def roots(self) -> np.ndarray:
        """Zeros of f (companion-matrix eigenvalues via numpy.roots)"""
        trimmed = self.trimmed().coeffs
        if trimmed.size <= 1:
            return np.zeros(0, dtype=complex)
        return np.roots(trimmed[::-1])

    def is_zero_free_closed_disc(self, margin: float = 1e-9) -> bool:
        """True when every zero satisfies |root| > 1 + margin"""
        if self.is_zero():
            return False
        roots = self.roots()
        return bool(roots.size == 0 or np.min(np.abs(roots)) > 1.0 + margin)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AnalyticPolynomial):
            return NotImplemented
        return np.array_equal(self.trimmed().coeffs, other.trimmed().coeffs)

    def __hash__(self):
        return hash(self.trimmed().coeffs.tobytes())

    def __repr__(self) -> str:
        return f"AnalyticPolynomial({self._coeffs.tolist()})"


class TrigPolynomial:
    """
    f(e^{i theta}) = sum_{n=min_degree}^{max_degree} a_n e^{i n theta}.

    coeffs[k] is the coefficient of z^(min_degree + k); min_degree <= 0.
    """

    __slots__ = ("_min_degree", "_coeffs")

    def __init__(self, min_degree: int, coeffs: Iterable[complex]):
        if int(min_degree) != min_degree or min_degree > 0:
            raise DomainError(f"min_degree must be an integer <= 0, got {min_degree}")
        self._min_degree = int(min_degree)
        self._coeffs = _as_coeff_array(coeffs)

    @classmethod
    def from_analytic(cls, f: AnalyticPolynomial) -> "TrigPolynomial":
        return cls(0, f.coeffs)

    @property
    def min_degree(self) -> int:
        return self._min_degree

    @property
    def max_degree(self) -> int:
        return self._min_degree + self._coeffs.size - 1

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    def is_zero(self) -> bool:
        return not np.any(self._coeffs)

    def evaluate(self, z: ArrayLike) -> ArrayLike:
        """Value at z (intended for |z| = 1; any z != 0 is accepted)"""
        if self._coeffs.size == 0:
            return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
        return np.polyval(self._coeffs[::-1], z) * np.power(z, self._min_degree)

    __call__ = evaluate

    def shifted_analytic(self) -> AnalyticPolynomial:
        """z^(-min_degree) f(z): same modulus on the circle, analytic"""
        return AnalyticPolynomial(self._coeffs)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self._coeffs) ** 2)))

    def __repr__(self) -> str:
        return f"TrigPolynomial(min_degree={self._min_degree}, coeffs={self._coeffs.tolist()})"


def mobius_map(w: complex, z: ArrayLike) -> ArrayLike:
    """
    Disc automorphism phi_w(z) = (w - z) / (1 - conj(w) z); phi_w is its own inverse.

    Raises:
        DomainError: if |w| >= 1
    """
    w = complex(w)
    if not abs(w) < 1.0:
        raise DomainError(f"automorphism parameter must satisfy |w| < 1, got |w|={abs(w)}")
    return (w - z) / (1.0 - np.conj(w) * z)


class PullbackFunction:
    """
    g(z) = f(phi_w(z)) * sqrt(1 - |w|^2) / (1 - conj(w) z).

    An isometry of H^2 that transports |f|^2 (1 - |z|^2) without change.
    Evaluated lazily; never expanded into coefficients.
    """

    __slots__ = ("base", "w")

    def __init__(self, base: AnalyticPolynomial, w: complex):
        w = complex(w)
        if not abs(w) < 1.0:
            raise DomainError(f"automorphism parameter must satisfy |w| < 1, got |w|={abs(w)}")
        self.base = base
        self.w = w

    def evaluate(self, z: ArrayLike) -> ArrayLike:
        if np.any(np.abs(z) > 1.0 + CIRCLE_SLACK):
            raise DomainError("pullback functions are only evaluated on the closed unit disc")
        factor = math.sqrt(1.0 - abs(self.w) ** 2) / (1.0 - np.conj(self.w) * z)
        return self.base.evaluate(mobius_map(self.w, z)) * factor

    __call__ = evaluate

    def l2_norm(self) -> float:
        """H^2 norm, equal to that of the base polynomial"""
        return self.base.l2_norm()

    def __repr__(self) -> str:
        return f"PullbackFunction(base={self.base!r}, w={self.w!r})"


def evaluate(f, z: ArrayLike) -> ArrayLike:
    """Point evaluation of an AnalyticPolynomial, TrigPolynomial or PullbackFunction"""
    return f.evaluate(z)


def derivative(f: AnalyticPolynomial) -> AnalyticPolynomial:
    """f' by shift-and-scale of the coefficients"""
    coeffs = f.coeffs
    if coeffs.size <= 1:
        return AnalyticPolynomial(())
    return AnalyticPolynomial(coeffs[1:] * np.arange(1, coeffs.size))


def multiply(f: AnalyticPolynomial, g: AnalyticPolynomial) -> AnalyticPolynomial:
    """Product f g (coefficient convolution)"""
    if f.coeffs.size == 0 or g.coeffs.size == 0:
        return AnalyticPolynomial(())
    return AnalyticPolynomial(np.convolve(f.coeffs, g.coeffs))


def riesz_project(f: TrigPolynomial) -> AnalyticPolynomial:
    """Riesz projection: keep the coefficients of z^n with n >= 0"""
    if isinstance(f, AnalyticPolynomial):
        return f
    start = -f.min_degree
    return AnalyticPolynomial(f.coeffs[start:])


def weighted_pullback(f: AnalyticPolynomial, w: complex) -> PullbackFunction:
    """Weighted composition of f with phi_w (see PullbackFunction)"""
    return PullbackFunction(f, w)


def invariant_quantity(f, z: ArrayLike) -> ArrayLike:
    """Phi_f(z) = |f(z)|^2 (1 - |z|^2)"""
    value = f.evaluate(z)
    return (value.real ** 2 + value.imag ** 2) * (1.0 - np.abs(z) ** 2)


def reproducing_kernel(w: complex, degree: int) -> AnalyticPolynomial:
    """
    Degree-truncated normalized reproducing kernel sqrt(1-|w|^2) / (1 - conj(w) z).

    The truncation is renormalized to unit H^2 norm.
    """
    w = complex(w)
    if not abs(w) < 1.0:
        raise DomainError(f"kernel point must satisfy |w| < 1, got |w|={abs(w)}")
    coeffs = np.conj(w) ** np.arange(degree + 1)
    return AnalyticPolynomial(coeffs).normalized()
