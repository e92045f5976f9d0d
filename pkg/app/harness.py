#!/usr/bin/env python3
"""
Inequality harness

Defines the margin (right-hand side minus left-hand side) of every tested
inequality, runs seeded campaigns over random samples, fits the small-eps
necessity family for Riesz projections, and searches coefficient space for
near-counterexamples.

A margin below -tol is a suspected violation; it is re-evaluated with
quadrature tolerances tightened by recheck_factor and only counts if it
survives. Quadrature and self-check failures are recorded as failed trials.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from app.debug_logger import Timer
from app.errors import DomainError, LabError, QuadratureConvergenceError, SelfCheckError
from app.functions import AnalyticPolynomial, TrigPolynomial, multiply, riesz_project
from app.levelsets import (lambda_grid, normalize_to_origin, phi, radial_levelset_integral,
                           weak_type_margin)
from app.norms import (GLOBAL_INTERPOLATION_CONSTANT, bergman_norm, geometric_mean_norm,
                       hardy_norm, lebesgue_norm, u_functional)
from app.quadrature import QuadratureConfig
from app.sampling import SamplerKind, SamplerSpec, sample, sample_zero_free, trial_rng
from app.weights import coefficient_bergman_norm, weighted_dirichlet_norm

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-6
DEFAULT_RECHECK_FACTOR = 100.0
DEFAULT_UF_GRID = (1.25, 1.5, 1.75, 2.0, 2.5, 3.0)
DUALITY_TOL = 1e-12


class InequalityTag(Enum):
    BURBEA = "burbea"
    DUAL = "dual"
    BERGMAN_EMBED = "bergman_embed"
    RIESZ = "riesz"
    RIESZ_GEOMETRIC = "riesz_geometric"
    MEASURE = "measure"
    UF_MONOTONE = "uf_monotone"
    RADIAL_MONOTONE = "radial_monotone"
    LOGCONVEX = "logconvex"
    INTERP_BOUND = "interp_bound"
    RIESZ_KNOWN = "riesz_known"


TRIG_TAGS = {InequalityTag.RIESZ, InequalityTag.RIESZ_GEOMETRIC, InequalityTag.RIESZ_KNOWN}
SEARCHABLE_TAGS = {InequalityTag.BURBEA, InequalityTag.DUAL, InequalityTag.RIESZ, InequalityTag.MEASURE}


def riesz_exponent(r: float) -> float:
    """q = 4(1 - 1/r), the conjectured contractive target for L^r; 4 at r = inf"""
    return 4.0 if math.isinf(r) else 4.0 * (1.0 - 1.0 / r)


def known_riesz_exponent(r: float) -> float:
    """
    Exponent q with P: L^r -> H^q known to be contractive, 4/3 <= r <= inf:
    4r/(r+2) for r >= 2 and 2r/(4-r) for r <= 2.
    """
    if math.isinf(r):
        return 4.0
    if r >= 2.0:
        return 4.0 * r / (r + 2.0)
    return 2.0 * r / (4.0 - r)


def conjugate(r: float) -> float:
    if math.isinf(r):
        return 1.0
    if r == 1.0:
        return math.inf
    return r / (r - 1.0)


def duality_pairs(r: float) -> List[Tuple[float, float]]:
    """
    The pair (r, q) with q = 4(1 - 1/r) and, when q >= 1, its dual pair (q*, r*).

    Both satisfy q * r* = 4.

    Raises:
        DomainError: r <= 1
    """
    if not r > 1:
        raise DomainError(f"riesz exponent r must exceed 1, got {r}")
    q = riesz_exponent(r)
    pairs = [(r, q)]
    if q >= 1.0:
        pairs.append((conjugate(q), conjugate(r)))
    for left, right in pairs:
        product = right * conjugate(left)
        if abs(product - 4.0) > DUALITY_TOL * 4.0:
            raise SelfCheckError(f"duality bookkeeping broken for ({left}, {right}): q r* = {product!r}")
    return pairs


@dataclass(frozen=True)
class InequalityKind:
    """Which inequality a trial tests, with its parameters"""

    tag: InequalityTag
    p: Optional[float] = None
    q: Optional[float] = None
    r: Optional[float] = None
    alpha: Optional[float] = None
    lam: Optional[float] = None
    alphas: Tuple[float, ...] = ()
    lambda_ratio: float = 0.9
    lambda_steps: int = 20

    def __post_init__(self):
        tag = self.tag
        if tag is InequalityTag.BURBEA and not (self.p is not None and 0 < self.p <= 2):
            raise DomainError(f"burbea needs p in (0, 2], got {self.p}")
        if tag is InequalityTag.INTERP_BOUND and not (self.p is not None and 0 < self.p < 1):
            raise DomainError(f"interp_bound needs p in (0, 1), got {self.p}")
        if tag is InequalityTag.DUAL and not (self.q is not None and 2 <= self.q < math.inf):
            raise DomainError(f"dual needs q in [2, inf), got {self.q}")
        if tag is InequalityTag.BERGMAN_EMBED and not (self.alpha is not None and self.alpha >= 1):
            raise DomainError(f"bergman_embed needs alpha >= 1, got {self.alpha}")
        if tag is InequalityTag.RIESZ and not (self.r is not None and self.r > 1):
            raise DomainError(f"riesz needs r in (1, inf], got {self.r}")
        if tag is InequalityTag.RIESZ_KNOWN and not (self.r is not None and self.r >= 4.0 / 3.0):
            raise DomainError(f"riesz_known needs r in [4/3, inf], got {self.r}")
        if tag is InequalityTag.MEASURE and not (self.lam is not None and 0 < self.lam < 1):
            raise DomainError(f"measure needs lambda in (0, 1), got {self.lam}")
        if tag is InequalityTag.UF_MONOTONE:
            if not self.alphas or any(not a > 1 for a in self.alphas):
                raise DomainError(f"uf_monotone needs a grid of alpha > 1, got {self.alphas}")
        if tag is InequalityTag.LOGCONVEX:
            if len(self.alphas) < 2 or any(a < 1 for a in self.alphas):
                raise DomainError(f"logconvex needs two or more exponents >= 1, got {self.alphas}")
        if tag is InequalityTag.RADIAL_MONOTONE:
            if not 0 < self.lambda_ratio < 1 or self.lambda_steps < 2:
                raise DomainError("radial_monotone needs lambda_ratio in (0, 1) and lambda_steps >= 2")

    @classmethod
    def burbea(cls, p: float) -> "InequalityKind":
        return cls(InequalityTag.BURBEA, p=p)

    @classmethod
    def dual(cls, q: float) -> "InequalityKind":
        return cls(InequalityTag.DUAL, q=q)

    @classmethod
    def bergman_embed(cls, alpha: float) -> "InequalityKind":
        return cls(InequalityTag.BERGMAN_EMBED, alpha=alpha)

    @classmethod
    def riesz(cls, r: float) -> "InequalityKind":
        return cls(InequalityTag.RIESZ, r=r)

    @classmethod
    def riesz_geometric(cls) -> "InequalityKind":
        return cls(InequalityTag.RIESZ_GEOMETRIC, r=1.0)

    @classmethod
    def riesz_known(cls, r: float) -> "InequalityKind":
        return cls(InequalityTag.RIESZ_KNOWN, r=r)

    @classmethod
    def measure(cls, lam: float) -> "InequalityKind":
        return cls(InequalityTag.MEASURE, lam=lam)

    @classmethod
    def uf_monotone(cls, alphas: Sequence[float] = DEFAULT_UF_GRID) -> "InequalityKind":
        return cls(InequalityTag.UF_MONOTONE, alphas=tuple(float(a) for a in alphas))

    @classmethod
    def radial_monotone(cls, ratio: float = 0.9, steps: int = 20) -> "InequalityKind":
        return cls(InequalityTag.RADIAL_MONOTONE, lambda_ratio=ratio, lambda_steps=steps)

    @classmethod
    def logconvex(cls, *alphas: float) -> "InequalityKind":
        return cls(InequalityTag.LOGCONVEX, alphas=tuple(float(a) for a in alphas))

    @classmethod
    def interp_bound(cls, p: float) -> "InequalityKind":
        return cls(InequalityTag.INTERP_BOUND, p=p)

    @property
    def sampler_kind(self) -> SamplerKind:
        return SamplerKind.STANDARD_TRIG if self.tag in TRIG_TAGS else SamplerKind.BURBEA

    @property
    def target_q(self) -> Optional[float]:
        if self.tag is InequalityTag.RIESZ:
            return riesz_exponent(self.r)
        if self.tag is InequalityTag.RIESZ_KNOWN:
            return known_riesz_exponent(self.r)
        return None

    @property
    def quasi_norm(self) -> bool:
        """True when the H^q target is only a quasi-norm (q < 1)"""
        q = self.target_q
        return q is not None and q < 1.0

    def params(self) -> Dict[str, object]:
        """Parameters for reports, in a fixed order"""
        params: Dict[str, object] = {}
        for name in ("p", "q", "r", "alpha", "lam"):
            value = getattr(self, name)
            if value is not None:
                params[name] = "inf" if math.isinf(value) else value
        if self.alphas:
            params["alphas"] = list(self.alphas)
        if self.tag is InequalityTag.RADIAL_MONOTONE:
            params["lambda_ratio"] = self.lambda_ratio
            params["lambda_steps"] = self.lambda_steps
        if self.target_q is not None:
            params["target_q"] = self.target_q
            params["quasi_norm"] = self.quasi_norm
        return params


@dataclass(frozen=True)
class TrialRecord:
    """
    One margin evaluation. margin = rhs - lhs; failed trials carry NaN values
    and the failure message.
    """

    kind: InequalityKind
    trial_index: int
    seed: int
    lhs: float
    rhs: float
    margin: float
    coeffs: Tuple[complex, ...]
    min_degree: int = 0
    elapsed_ms: Optional[float] = None
    failed: bool = False
    error: Optional[str] = None
    rechecked: bool = False
    attempts: int = 1

    def is_violation(self, tol: float) -> bool:
        return not self.failed and self.margin < -tol

    def function(self):
        if self.min_degree == 0:
            return AnalyticPolynomial(self.coeffs)
        return TrigPolynomial(self.min_degree, self.coeffs)


@dataclass
class ConjectureReport:
    """Aggregated campaign result; records are kept in trial order"""

    kind: InequalityKind
    sampler: SamplerSpec
    tol: float
    quadrature: QuadratureConfig
    records: List[TrialRecord] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def trials(self) -> int:
        return len(self.records)

    @property
    def completed(self) -> List[TrialRecord]:
        return [r for r in self.records if not r.failed]

    @property
    def failed_trials(self) -> int:
        return sum(1 for r in self.records if r.failed)

    @property
    def violations(self) -> int:
        return sum(1 for r in self.records if r.is_violation(self.tol))

    @property
    def worst_case(self) -> Optional[TrialRecord]:
        completed = self.completed
        if not completed:
            return None
        # first minimum in trial order
        return min(completed, key=lambda r: r.margin)

    @property
    def min_margin(self) -> Optional[float]:
        worst = self.worst_case
        return None if worst is None else worst.margin

    def statistics(self) -> Dict[str, object]:
        """Kind-specific extras: acceptance rate for uf_monotone, worst weak-type ratio for measure"""
        stats: Dict[str, object] = {}
        if self.kind.tag is InequalityTag.UF_MONOTONE and self.records:
            attempts = sum(r.attempts for r in self.records)
            accepted = sum(1 for r in self.records if r.error != NO_ZERO_FREE_SAMPLE)
            stats["acceptance_rate"] = accepted / attempts if attempts else 0.0
        if self.kind.tag is InequalityTag.MEASURE and self.completed:
            stats["max_weak_type_ratio"] = max(r.lhs / r.rhs for r in self.completed)
        stats["rechecked"] = sum(1 for r in self.records if r.rechecked)
        return stats


NO_ZERO_FREE_SAMPLE = "no zero-free sample within the rejection cap"


class TrialOptions(NamedTuple):
    tol: float = DEFAULT_TOL
    recheck_factor: float = DEFAULT_RECHECK_FACTOR
    max_rejections: int = 1000
    timing: bool = False


def _coefficient_tuple(f) -> Tuple[Tuple[complex, ...], int]:
    if isinstance(f, TrigPolynomial):
        return tuple(complex(c) for c in f.coeffs), f.min_degree
    return tuple(complex(c) for c in f.coeffs), 0


def evaluate_sides(kind: InequalityKind, f, cfg: QuadratureConfig,
                   factors: Sequence[AnalyticPolynomial] = ()) -> Tuple[float, float]:
    """
    (lhs, rhs) of the inequality for a prepared function.

    For logconvex, `factors` holds the independent samples and f is ignored.
    Composite kinds (uf_monotone, radial_monotone) report the worst excess as
    lhs against rhs = 0.
    """
    tag = kind.tag
    if tag is InequalityTag.BURBEA:
        return coefficient_bergman_norm(f, 2.0 / kind.p), hardy_norm(f, kind.p, cfg)
    if tag is InequalityTag.INTERP_BOUND:
        return (coefficient_bergman_norm(f, 2.0 / kind.p),
                GLOBAL_INTERPOLATION_CONSTANT * hardy_norm(f, kind.p, cfg))
    if tag is InequalityTag.DUAL:
        return hardy_norm(f, kind.q, cfg), weighted_dirichlet_norm(f, kind.q / 2.0)
    if tag is InequalityTag.BERGMAN_EMBED:
        return bergman_norm(f, 2.0 * kind.alpha, kind.alpha, cfg), hardy_norm(f, 2.0, cfg)
    if tag in (InequalityTag.RIESZ, InequalityTag.RIESZ_KNOWN):
        return hardy_norm(riesz_project(f), kind.target_q, cfg), lebesgue_norm(f, kind.r, cfg)
    if tag is InequalityTag.RIESZ_GEOMETRIC:
        return geometric_mean_norm(riesz_project(f), cfg), lebesgue_norm(f, 1.0, cfg)
    if tag is InequalityTag.MEASURE:
        g = normalize_to_origin(f, cfg)
        margin = weak_type_margin(f, kind.lam, cfg, g=g)
        rhs = 1.0 / kind.lam - 1.0
        return rhs - margin, rhs
    if tag is InequalityTag.UF_MONOTONE:
        slopes = [u_functional(f, alpha, cfg, check_derivative=False).derivative for alpha in kind.alphas]
        return max(slopes), 0.0
    if tag is InequalityTag.RADIAL_MONOTONE:
        return _radial_excess(kind, f, cfg), 0.0
    if tag is InequalityTag.LOGCONVEX:
        product = factors[0]
        rhs = coefficient_bergman_norm(factors[0], kind.alphas[0])
        for factor, alpha in zip(factors[1:], kind.alphas[1:]):
            product = multiply(product, factor)
            rhs *= coefficient_bergman_norm(factor, alpha)
        return coefficient_bergman_norm(product, sum(kind.alphas)), rhs
    raise DomainError(f"unsupported inequality {tag}")


def _radial_excess(kind: InequalityKind, f: AnalyticPolynomial, cfg: QuadratureConfig) -> float:
    """
    Worst failure of: the radial integral is nondecreasing as lambda decreases,
    and never exceeds ||f||^2.
    """
    g = normalize_to_origin(f, cfg)
    lams = lambda_grid(phi(g, 0.0), kind.lambda_ratio, kind.lambda_steps)
    values = [radial_levelset_integral(g, lam, cfg).value for lam in lams]
    norm_sq = f.l2_norm() ** 2
    excess = max(value - norm_sq for value in values)
    for high, low in zip(values, values[1:]):
        excess = max(excess, high - low)
    return excess


def _prepare(kind: InequalityKind, spec: SamplerSpec, trial_index: int, options: TrialOptions):
    """Draw the trial's function(s); returns (f, factors, attempts)"""
    tag = kind.tag
    if tag is InequalityTag.LOGCONVEX:
        factors = [sample(spec, trial_index, j) for j in range(len(kind.alphas))]
        return factors[0], factors, 1
    if tag is InequalityTag.UF_MONOTONE:
        f, attempts = sample_zero_free(spec, trial_index, options.max_rejections)
        return (f.normalized() if f is not None else None), (), attempts
    f = sample(spec, trial_index)
    if tag in (InequalityTag.MEASURE, InequalityTag.RADIAL_MONOTONE):
        f = f.normalized()
    return f, (), 1


def run_trial(kind: InequalityKind, spec: SamplerSpec, trial_index: int,
              cfg: QuadratureConfig, options: TrialOptions = TrialOptions()) -> TrialRecord:
    """
    Sample one function and evaluate the margin of `kind` on it.

    Raises:
        DomainError: the sampler does not match the inequality
    """
    if spec.kind is not kind.sampler_kind:
        raise DomainError(
            f"{kind.tag.value} needs a {kind.sampler_kind.value} sampler, got {spec.kind.value}"
        )
    timer = Timer().start()
    f, factors, attempts = _prepare(kind, spec, trial_index, options)

    def failed(message: str, coeffs=(), min_degree=0) -> TrialRecord:
        logger.warning(f"trial {trial_index} ({kind.tag.value}) failed: {message}")
        return TrialRecord(kind, trial_index, spec.master_seed, math.nan, math.nan, math.nan,
                           coeffs, min_degree, timer.stop() if options.timing else None,
                           failed=True, error=message, attempts=attempts)

    if f is None:
        return failed(NO_ZERO_FREE_SAMPLE)

    digest_source = f
    if kind.tag is InequalityTag.LOGCONVEX:
        digest_source = factors[0]
        for factor in factors[1:]:
            digest_source = multiply(digest_source, factor)
    coeffs, min_degree = _coefficient_tuple(digest_source)

    rechecked = False
    try:
        lhs, rhs = evaluate_sides(kind, f, cfg, factors)
        if rhs - lhs < -options.tol and kind.tag is not InequalityTag.LOGCONVEX:
            tight = cfg.tightened(options.recheck_factor)
            logger.warning(
                f"trial {trial_index}: suspected violation {rhs - lhs:.3e}, rechecking at tighter tolerance"
            )
            lhs, rhs = evaluate_sides(kind, f, tight, factors)
            rechecked = True
    except (QuadratureConvergenceError, SelfCheckError) as e:
        return failed(str(e), coeffs, min_degree)

    record = TrialRecord(kind, trial_index, spec.master_seed, lhs, rhs, rhs - lhs,
                         coeffs, min_degree, timer.stop() if options.timing else None,
                         rechecked=rechecked, attempts=attempts)
    logger.debug(f"trial {trial_index}: lhs={lhs!r} rhs={rhs!r} margin={record.margin!r}")
    return record


def run_campaign(kind: InequalityKind, spec: SamplerSpec, n_trials: int, tol: float,
                 cfg: QuadratureConfig, threads: Optional[int] = None,
                 options: Optional[TrialOptions] = None) -> ConjectureReport:
    """
    Run trials 0..n_trials-1 and aggregate them in trial order.

    Args:
        kind: Inequality under test
        spec: Sampler; its master_seed fixes every trial
        n_trials: Number of trials (>= 1)
        tol: Violation threshold on the margin
        cfg: Quadrature configuration
        threads: Worker threads (None or 1 runs inline)
        options: Recheck factor, rejection cap and timing

    Returns:
        ConjectureReport, identical for a given seed whatever the thread count
    """
    if int(n_trials) != n_trials or n_trials < 1:
        raise DomainError(f"n_trials must be a positive integer, got {n_trials}")
    if kind.tag is InequalityTag.RIESZ:
        duality_pairs(kind.r)
    options = (options or TrialOptions())._replace(tol=tol)

    logger.info(f"Campaign {kind.tag.value} {kind.params()} - {n_trials} trials, seed {spec.master_seed}")
    timer = Timer().start()

    def one(index: int) -> TrialRecord:
        return run_trial(kind, spec, index, cfg, options)

    if threads is None or threads <= 1:
        records = [one(index) for index in range(n_trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            records = list(executor.map(one, range(n_trials)))

    report = ConjectureReport(kind, spec, tol, cfg, records, timer.stop())
    logger.info(
        f"Campaign {kind.tag.value} finished: {report.violations} violations, "
        f"{report.failed_trials} failed, min margin {report.min_margin!r}"
    )
    return report


class NecessityResult(NamedTuple):
    slope: float
    predicted: float
    verdict: str
    eps: Tuple[float, ...]
    margins: Tuple[float, ...]


class NecessityFamily:
    """f_eps(z) = (1 - eps z) / (1 - eps conj(z))^rho on the circle, rho = 1 - 2/r"""

    def __init__(self, eps: float, rho: float):
        self.eps = eps
        self.rho = rho

    def evaluate(self, z):
        return (1.0 - self.eps * z) / (1.0 - self.eps * np.conj(z)) ** self.rho

    def projection(self) -> AnalyticPolynomial:
        """Riesz projection 1 - rho eps^2 - eps z"""
        return AnalyticPolynomial([1.0 - self.rho * self.eps ** 2, -self.eps])


def necessity_check(r: float, q: float, eps_grid: Sequence[float], cfg: QuadratureConfig,
                    slope_tol: float = 0.1) -> NecessityResult:
    """
    Fit margin(eps) = ||f_eps||_{L^r} - ||P f_eps||_{H^q} to s eps^2 + c eps^4 and
    compare s with the expansion slope 1/r + rho - q/4.

    The verdict is CONSISTENT when the signs agree and the fitted slope is
    within slope_tol (relative) of the expansion; for a zero predicted slope
    the fitted slope must be below slope_tol * max(eps)^2 in size.
    """
    if not r > 1:
        raise DomainError(f"r must exceed 1, got {r}")
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    eps = tuple(float(e) for e in eps_grid)
    if len(eps) < 2 or any(not 0 < e <= 0.2 for e in eps) or list(eps) != sorted(eps):
        raise DomainError("eps_grid needs two or more sorted values in (0, 0.2]")

    rho = 1.0 if math.isinf(r) else 1.0 - 2.0 / r
    predicted = (0.0 if math.isinf(r) else 1.0 / r) + rho - q / 4.0

    margins = []
    for e in eps:
        family = NecessityFamily(e, rho)
        margins.append(lebesgue_norm(family, r, cfg) - hardy_norm(family.projection(), q, cfg))
    eps_array = np.array(eps)
    design = np.column_stack((eps_array ** 2, eps_array ** 4))
    (slope, _), *_ = np.linalg.lstsq(design, np.array(margins), rcond=None)
    slope = float(slope)

    if predicted == 0.0:
        consistent = abs(slope) <= slope_tol * max(eps) ** 2
    else:
        consistent = (np.sign(slope) == np.sign(predicted)
                      and abs(slope - predicted) <= slope_tol * abs(predicted))
    verdict = "CONSISTENT" if consistent else "INCONSISTENT"
    logger.info(f"necessity r={r} q={q}: slope {slope:.6g}, predicted {predicted:.6g} -> {verdict}")
    return NecessityResult(slope, predicted, verdict, eps, tuple(margins))


class ExtremalResult(NamedTuple):
    record: TrialRecord
    error_estimate: float
    violation: bool
    evaluations: int


def _search_shape(kind: InequalityKind, degree: int) -> Tuple[int, int]:
    """(min_degree, coefficient count) of the search space"""
    if kind.tag in TRIG_TAGS:
        return -degree, 2 * degree + 1
    return 0, degree + 1


def _vector_to_function(x: np.ndarray, min_degree: int):
    half = x.size // 2
    coeffs = x[:half] + 1j * x[half:]
    norm = float(np.linalg.norm(coeffs))
    if norm == 0.0:
        return None
    coeffs = coeffs / norm
    if min_degree == 0:
        return AnalyticPolynomial(coeffs)
    return TrigPolynomial(min_degree, coeffs)


def _function_to_vector(f, size: int) -> np.ndarray:
    coeffs = np.zeros(size, dtype=complex)
    source = np.asarray(f.coeffs, dtype=complex)[:size]
    coeffs[: source.size] = source
    return np.concatenate((coeffs.real, coeffs.imag))


def extremal_search(kind: InequalityKind, degree: int, n_restarts: int, cfg: QuadratureConfig,
                    starts: Sequence = (), master_seed: int = 0,
                    max_iterations: int = 400, recheck_factor: float = DEFAULT_RECHECK_FACTOR) -> ExtremalResult:
    """
    Minimize the margin over unit-norm coefficient vectors with Nelder-Mead.

    Args:
        kind: burbea, dual, riesz or measure
        degree: Polynomial degree (riesz searches min_degree = -degree too)
        n_restarts: Random starting points besides `starts`
        cfg: Quadrature configuration
        starts: Functions to start from, e.g. the worst campaign samples
        master_seed: Seed for the random starts
        max_iterations: Nelder-Mead iteration cap per start
        recheck_factor: Tightening used for the error estimate

    Returns:
        ExtremalResult with the worst record, an error estimate from a
        tighter re-evaluation, and whether the margin is a claimed violation
        (below -10 times the error estimate).
    """
    if kind.tag not in SEARCHABLE_TAGS:
        raise DomainError(f"extremal search supports burbea, dual, riesz and measure, got {kind.tag.value}")
    if int(degree) != degree or degree < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {degree}")

    min_degree, size = _search_shape(kind, int(degree))
    evaluations = [0]

    def margin_of(f, config: QuadratureConfig) -> float:
        lhs, rhs = evaluate_sides(kind, f, config)
        return rhs - lhs

    def objective(x: np.ndarray) -> float:
        evaluations[0] += 1
        f = _vector_to_function(x, min_degree)
        if f is None:
            return 1e3
        try:
            return margin_of(f, cfg)
        except LabError:
            return 1e3

    initial = [_function_to_vector(f, size) for f in starts]
    for restart in range(n_restarts):
        rng = trial_rng(master_seed, restart, 1)
        initial.append(rng.standard_normal(2 * size))
    if not initial:
        initial.append(np.concatenate((np.eye(1, size).ravel(), np.zeros(size))))

    best_x, best_value = None, math.inf
    for x0 in initial:
        result = minimize(objective, x0, method='Nelder-Mead',
                          options={'maxiter': max_iterations, 'xatol': 1e-8, 'fatol': 1e-12})
        if result.fun < best_value:
            best_x, best_value = result.x, float(result.fun)

    f = _vector_to_function(best_x, min_degree)
    lhs, rhs = evaluate_sides(kind, f, cfg)
    tight_lhs, tight_rhs = evaluate_sides(kind, f, cfg.tightened(recheck_factor))
    margin = rhs - lhs
    error_estimate = abs(margin - (tight_rhs - tight_lhs)) + cfg.abs_tol
    violation = (tight_rhs - tight_lhs) < -10.0 * error_estimate

    coeffs, record_min_degree = _coefficient_tuple(f)
    record = TrialRecord(kind, -1, master_seed, lhs, rhs, margin, coeffs, record_min_degree)
    logger.info(f"extremal search {kind.tag.value}: min margin {margin!r} (+/- {error_estimate:.2e})")
    return ExtremalResult(record, error_estimate, bool(violation), evaluations[0])
