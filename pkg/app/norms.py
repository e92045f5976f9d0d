#!/usr/bin/env python3
"""
Norm functionals on polynomials

Hardy H^p norms, circle L^r norms, the geometric mean (the H^0 limit),
weighted Bergman A^p_alpha norms, the U_f(alpha) functional with its
derivative, the Littlewood-Paley form of the H^2 norm, and the closed-form
interpolation constants.

Where a quantity has a second, independent route (Parseval, the coefficient
formula for even exponents, Jensen's formula, a central difference) the
second route is computed too and a disagreement raises SelfCheckError.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from app.errors import DomainError, PreconditionError, SelfCheckError
from app.functions import AnalyticPolynomial, TrigPolynomial, derivative
from app.quadrature import TWO_PI, QuadratureConfig, circle_integral, disc_integral
from app.weights import coefficient_bergman_norm, weighted_dirichlet_norm

logger = logging.getLogger(__name__)

# (2 / (e log 2))^(1/2): bound on the interpolation constants for every alpha >= 2
GLOBAL_INTERPOLATION_CONSTANT = math.sqrt(2.0 / (math.e * math.log(2.0)))

PARSEVAL_TOL = 1e-8
COEFFICIENT_ROUTE_TOL = 1e-6
JENSEN_TOL = 1e-6
DERIVATIVE_STEP = 1e-4
DERIVATIVE_TOL = 1e-4
NORMALIZATION_TOL = 1e-10

SUP_GRID_POINTS = 4096
SUP_CANDIDATES = 8


class NormKind(Enum):
    HARDY = "hardy"
    LEBESGUE = "lebesgue"
    GEOMETRIC_MEAN = "geometric_mean"
    BERGMAN = "bergman"
    U_VALUE = "u_value"
    U_DERIVATIVE = "u_derivative"
    LITTLEWOOD_PALEY = "littlewood_paley"


@dataclass(frozen=True)
class NormRequest:
    """
    One norm evaluation: the kind plus the exponents it needs.

    hardy uses p, lebesgue uses r (may be math.inf), bergman uses p and alpha
    (alpha = 1 means the H^p fallback), u_value/u_derivative use alpha.
    """

    kind: NormKind
    p: Optional[float] = None
    r: Optional[float] = None
    alpha: Optional[float] = None
    cfg: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if self.kind in (NormKind.HARDY, NormKind.BERGMAN):
            _check_positive(self.p, "p")
        if self.kind is NormKind.LEBESGUE:
            _check_positive(self.r, "r")
        if self.kind is NormKind.BERGMAN:
            if self.alpha is None or self.alpha < 1:
                raise DomainError(f"bergman norms need alpha >= 1, got {self.alpha}")
        if self.kind in (NormKind.U_VALUE, NormKind.U_DERIVATIVE):
            if self.alpha is None or not self.alpha > 1:
                raise DomainError(f"U_f needs alpha > 1, got {self.alpha}")


class UValue(NamedTuple):
    value: float
    derivative: float


def _check_positive(value: Optional[float], name: str) -> float:
    if value is None or not value > 0 or math.isnan(value):
        raise DomainError(f"{name} must be > 0, got {value}")
    return float(value)


def _squared_modulus(values: np.ndarray) -> np.ndarray:
    return values.real ** 2 + values.imag ** 2


def _self_check(name: str, primary: float, secondary: float, tol: float) -> None:
    scale = max(abs(primary), abs(secondary), 1e-300)
    if abs(primary - secondary) > tol * scale:
        logger.warning(f"{name} self-check failed: {primary!r} vs {secondary!r}")
        raise SelfCheckError(
            f"{name}: quadrature value {primary!r} and independent value {secondary!r} "
            f"differ by more than {tol:g} relative"
        )


def _boundary_values(f, theta: np.ndarray) -> np.ndarray:
    return f.evaluate(np.exp(1j * theta))


def _circle_power_mean(f, p: float, cfg: QuadratureConfig) -> float:
    """(1/2pi) integral of |f(e^{i theta})|^p"""
    def integrand(theta):
        return np.abs(_boundary_values(f, theta)) ** p

    return circle_integral(integrand, cfg).value


def hardy_norm(f: AnalyticPolynomial, p: float, cfg: QuadratureConfig) -> float:
    """
    H^p norm ((1/2pi) integral |f(e^{i theta})|^p dtheta)^(1/p).

    At p = 2 the quadrature value is checked against the coefficient l2 norm.

    Raises:
        DomainError: p <= 0
        SelfCheckError: Parseval disagreement at p = 2
        QuadratureConvergenceError: propagated
    """
    p = _check_positive(p, "p")
    mean = _circle_power_mean(f, p, cfg)
    value = max(mean, 0.0) ** (1.0 / p)
    if p == 2.0:
        _self_check("Parseval", value, f.l2_norm(), PARSEVAL_TOL)
    return value


def lebesgue_norm(f, r: float, cfg: QuadratureConfig) -> float:
    """
    L^r norm of a function on the circle; r = math.inf gives the sup norm.

    The sup norm scans a 4096-point grid and refines the best 8 grid points
    with a bounded scalar search.
    """
    r = _check_positive(r, "r")
    if math.isinf(r):
        return _sup_norm(f)
    return max(_circle_power_mean(f, r, cfg), 0.0) ** (1.0 / r)


def _sup_norm(f) -> float:
    step = TWO_PI / SUP_GRID_POINTS
    theta = step * np.arange(SUP_GRID_POINTS)
    moduli = np.abs(_boundary_values(f, theta))
    best = float(np.max(moduli))
    for index in np.argsort(moduli)[-SUP_CANDIDATES:]:
        center = theta[index]
        result = minimize_scalar(
            lambda t: -float(np.abs(f.evaluate(np.exp(1j * t)))),
            bounds=(center - step, center + step),
            method='bounded',
            options={'xatol': 1e-12},
        )
        best = max(best, float(-result.fun))
    return best


def jensen_log_mean(f) -> float:
    """
    Circle mean of log|f| from the zeros (Jensen's formula).

    For f = a_N prod (z - z_k): log|a_N| + sum log max(1, |z_k|).
    A TrigPolynomial is handled through z^(-min_degree) f, which has the
    same modulus on the circle.
    """
    if isinstance(f, TrigPolynomial):
        f = f.shifted_analytic()
    trimmed = f.trimmed()
    if trimmed.is_zero():
        raise DomainError("log mean of the zero polynomial is -infinity")
    leading = abs(trimmed.coeffs[-1])
    roots = trimmed.roots()
    return float(math.log(leading) + np.sum(np.log(np.maximum(1.0, np.abs(roots)))))


def geometric_mean_norm(f, cfg: QuadratureConfig) -> float:
    """
    exp((1/2pi) integral log|f(e^{i theta})| dtheta), computed with the
    singularity guard and checked against Jensen's formula.

    Raises:
        DomainError: f is identically zero
    """
    analytic = f.shifted_analytic() if isinstance(f, TrigPolynomial) else f
    if analytic.is_zero():
        raise DomainError("geometric mean of the zero function is undefined")

    def integrand(theta):
        with np.errstate(divide='ignore'):
            return np.log(np.abs(_boundary_values(analytic, theta)))

    def guard(theta):
        return np.abs(_boundary_values(analytic, theta))

    log_mean = circle_integral(integrand, cfg.guarded(), guard=guard).value
    value = math.exp(log_mean)
    _self_check("Jensen", value, math.exp(jensen_log_mean(analytic)), JENSEN_TOL)
    return value


def bergman_norm_general(f, p: float, beta: float, cfg: QuadratureConfig) -> float:
    """
    (integral_D |f|^p (beta-1)(1-|z|^2)^(beta-2) dxdy/pi)^(1/p) for beta > 1.

    No H^p fallback at beta = 1 and no coefficient cross-check.
    """
    p = _check_positive(p, "p")
    if not beta > 1:
        raise DomainError(f"weight exponent must be > 1, got {beta}")

    def integrand(z, gap):
        return np.abs(f.evaluate(z)) ** p * (beta - 1.0) * gap ** (beta - 2.0)

    integral = disc_integral(integrand, cfg, gap_aware=True).value
    return max(integral, 0.0) ** (1.0 / p)


def bergman_norm(f: AnalyticPolynomial, p: float, alpha: float, cfg: QuadratureConfig) -> float:
    """
    A^p_alpha norm by disc quadrature; alpha = 1 is the H^p norm.

    For even integer p the value is compared with the exact coefficient route
    ||f^(p/2)||_{A^2_alpha}^(2/p).

    Raises:
        DomainError: p <= 0 or alpha < 1
        SelfCheckError: coefficient route disagreement
    """
    p = _check_positive(p, "p")
    if alpha is None or alpha < 1:
        raise DomainError(f"alpha must be >= 1, got {alpha}")
    if alpha == 1:
        return hardy_norm(f, p, cfg)

    value = bergman_norm_general(f, p, alpha, cfg)
    if p == round(p) and int(round(p)) % 2 == 0:
        power = f.power(int(round(p)) // 2)
        exact = coefficient_bergman_norm(power, alpha) ** (2.0 / p)
        _self_check("Bergman coefficient route", value, exact, COEFFICIENT_ROUTE_TOL)
    return value


def _require_normalized(f: AnalyticPolynomial) -> None:
    norm = f.l2_norm()
    if abs(norm - 1.0) > NORMALIZATION_TOL:
        raise PreconditionError(f"f must have unit H^2 norm, got {norm!r}")


def _u_value(f: AnalyticPolynomial, alpha: float, cfg: QuadratureConfig) -> float:
    def integrand(z, gap):
        return _squared_modulus(f.evaluate(z)) ** alpha * gap ** (alpha - 2.0)

    return (alpha - 1.0) * disc_integral(integrand, cfg, gap_aware=True).value


def u_functional(f: AnalyticPolynomial, alpha: float, cfg: QuadratureConfig,
                 check_derivative: bool = True) -> UValue:
    """
    U_f(alpha) = integral |f|^(2 alpha) (alpha-1)(1-|z|^2)^(alpha-2) dxdy/pi
    and its alpha-derivative.

    U'(alpha) = I1 - (alpha - 1) I2 with
        I1 = integral |f|^(2 alpha) (1-|z|^2)^(alpha-2)
        I2 = integral |f|^(2 alpha) (1-|z|^2)^(alpha-2) log(1/(|f|^2 (1-|z|^2)))

    Args:
        f: Polynomial with unit H^2 norm
        alpha: Exponent > 1
        cfg: Quadrature configuration
        check_derivative: Compare U' with a central difference of step 1e-4

    Raises:
        PreconditionError: f not normalized
        SelfCheckError: central difference disagreement
    """
    if not alpha > 1:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    _require_normalized(f)

    def moments(z, gap):
        modulus_sq = _squared_modulus(f.evaluate(z))
        weighted = modulus_sq ** alpha * gap ** (alpha - 2.0)
        with np.errstate(divide='ignore', invalid='ignore'):
            log_term = -np.log(modulus_sq * gap)
        # |f|^(2 alpha) log|f|^2 -> 0 at zeros of f
        return np.where(modulus_sq > 0.0, weighted * log_term, 0.0)

    def powers(z, gap):
        return _squared_modulus(f.evaluate(z)) ** alpha * gap ** (alpha - 2.0)

    first = disc_integral(powers, cfg, gap_aware=True).value
    second = disc_integral(moments, cfg, gap_aware=True).value
    value = (alpha - 1.0) * first
    slope = first - (alpha - 1.0) * second

    if check_derivative and alpha - DERIVATIVE_STEP > 1.0:
        upper = _u_value(f, alpha + DERIVATIVE_STEP, cfg)
        lower = _u_value(f, alpha - DERIVATIVE_STEP, cfg)
        difference = (upper - lower) / (2.0 * DERIVATIVE_STEP)
        if abs(difference - slope) > DERIVATIVE_TOL * max(1.0, abs(slope)):
            logger.warning(f"U' self-check failed at alpha={alpha}: {slope!r} vs {difference!r}")
            raise SelfCheckError(
                f"U'({alpha}) = {slope!r} disagrees with central difference {difference!r}"
            )
    return UValue(value, slope)


def littlewood_paley_h2(f: AnalyticPolynomial, cfg: QuadratureConfig) -> float:
    """|f(0)|^2 + integral_D |f'(z)|^2 log(1/|z|^2) dxdy/pi, which equals ||f||_{H^2}^2"""
    at_origin = abs(complex(f.evaluate(0.0))) ** 2
    slope = derivative(f)
    if slope.is_zero():
        return at_origin

    def integrand(z, gap):
        # log(1/|z|^2) = -log(1 - gap)
        return _squared_modulus(slope.evaluate(z)) * -np.log1p(-gap)

    return at_origin + disc_integral(integrand, cfg, gap_aware=True).value


def interpolation_constant(alpha: float) -> float:
    """
    ((alpha - 1) / (([alpha] - 1)^(1 - {alpha}) [alpha]^{alpha}))^(1/(2 alpha))

    [alpha] and {alpha} are the integer and fractional parts. Equals 1 at
    integer alpha.

    Raises:
        DomainError: alpha < 2
    """
    alpha = float(alpha)
    if not alpha >= 2 or math.isinf(alpha):
        raise DomainError(f"interpolation constants need alpha >= 2, got {alpha}")
    whole = math.floor(alpha)
    frac = alpha - whole
    base = (alpha - 1.0) / ((whole - 1.0) ** (1.0 - frac) * whole ** frac)
    return base ** (1.0 / (2.0 * alpha))


def interpolation_constant_peak(k: int) -> float:
    """
    Largest value on [k, k+1] of the base (alpha - 1)/((k-1)^(1-{alpha}) k^{alpha}).

    With b = log(k/(k-1)) the maximum is exp(k b - log(k b) - 1); at k = 2
    this is 2/(e log 2), the square of GLOBAL_INTERPOLATION_CONSTANT.
    """
    if int(k) != k or k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k}")
    b = math.log(k / (k - 1.0))
    return math.exp(k * b - math.log(k * b) - 1.0)


def exponent_necessity_margin(p: float, alpha: float, beta: float, eps: float,
                              cfg: QuadratureConfig) -> float:
    """
    ||1 + eps z||_{H^p} - ||1 + eps z||_{A^{p alpha}_beta}.

    For small eps this is about (p eps^2 / 4)(1 - alpha/beta), so the
    embedding H^p into A^{p alpha}_beta cannot be contractive when beta < alpha.
    """
    f = AnalyticPolynomial([1.0, eps])
    return hardy_norm(f, p, cfg) - bergman_norm_general(f, p * alpha, beta, cfg)


def dirichlet_exponent_necessity_margin(q: float, beta: float, eps: float,
                                        cfg: QuadratureConfig) -> float:
    """||1 + eps z||_{D_beta} - ||1 + eps z||_{H^q}; about eps^2 (beta/2 - q/4)"""
    f = AnalyticPolynomial([1.0, eps])
    return weighted_dirichlet_norm(f, beta) - hardy_norm(f, q, cfg)


def compute_norm(request: NormRequest, f) -> float:
    """Dispatch a NormRequest to the matching functional"""
    kind = request.kind
    cfg = request.cfg
    if kind is NormKind.HARDY:
        return hardy_norm(_analytic(f), request.p, cfg)
    if kind is NormKind.LEBESGUE:
        return lebesgue_norm(f, request.r, cfg)
    if kind is NormKind.GEOMETRIC_MEAN:
        return geometric_mean_norm(f, cfg)
    if kind is NormKind.BERGMAN:
        return bergman_norm(_analytic(f), request.p, request.alpha, cfg)
    if kind is NormKind.U_VALUE:
        return u_functional(_analytic(f), request.alpha, cfg, check_derivative=False).value
    if kind is NormKind.U_DERIVATIVE:
        return u_functional(_analytic(f), request.alpha, cfg).derivative
    if kind is NormKind.LITTLEWOOD_PALEY:
        return littlewood_paley_h2(_analytic(f), cfg)
    raise DomainError(f"unknown norm kind {kind}")


def _analytic(f) -> AnalyticPolynomial:
    if isinstance(f, TrigPolynomial):
        if f.min_degree != 0 and np.any(f.coeffs[: -f.min_degree]):
            raise DomainError("this norm needs an analytic polynomial (min_degree 0)")
        return AnalyticPolynomial(f.coeffs[-f.min_degree:])
    return f
