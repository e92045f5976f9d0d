#!/usr/bin/env python3
"""
Numerical integration on the circle and the disc, bracketed root solving and
derivative-free maximization on the disc.

The integrator is an adaptive Gauss-Kronrod (7/15) rule: every panel is
integrated with the nested pair, the panel with the largest error estimate is
bisected, and the final sum is taken over panels in interval order so the
result does not depend on the order in which panels were refined.

Integrands are vectorized: they receive a numpy array of nodes and return an
array of the same shape.
"""

import heapq
import itertools
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize

from app.errors import BracketError, DomainError, QuadratureConvergenceError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# Kronrod 15-point nodes on [0, 1] (positive half) and weights; the Gauss
# 7-point rule uses every second node.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full symmetric node set on [-1, 1]
KRONROD_NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
KRONROD_WEIGHTS = np.concatenate((_WGK[:-1], _WGK[::-1]))
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]

# Angular trapezoid rule for disc integrals
ANGULAR_START_POINTS = 64
ANGULAR_MAX_POINTS = 8192

# Initial panels for disc integrals are graded geometrically toward t = 0,
# i.e. toward the unit circle where (1 - |z|^2)^(alpha - 2) concentrates.
RADIAL_GRADING_LEVELS = 24


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Tolerances and limits for adaptive quadrature.

    singularity_guard enables forced subdivision of panels where a guard
    function (|f| for log integrands) falls below guard_threshold.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 4000
    singularity_guard: bool = False
    guard_threshold: float = 1e-8
    guard_min_width: float = 1e-6
    initial_panels: int = 16

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be a positive integer")
        if self.initial_panels < 1:
            raise DomainError("initial_panels must be >= 1")

    def tightened(self, factor: float) -> "QuadratureConfig":
        """Same config with tolerances divided by factor (and room for more panels)"""
        return replace(
            self,
            abs_tol=self.abs_tol / factor,
            rel_tol=self.rel_tol / factor,
            max_subdivisions=int(self.max_subdivisions * 4),
        )

    def guarded(self) -> "QuadratureConfig":
        return replace(self, singularity_guard=True)

    def to_dict(self) -> dict:
        return {
            'abs_tol': self.abs_tol,
            'rel_tol': self.rel_tol,
            'max_subdivisions': self.max_subdivisions,
            'singularity_guard': self.singularity_guard,
        }


class QuadratureResult(NamedTuple):
    """Integral value, error estimate and number of panels used"""
    value: float
    error: float
    panels: int


class DiscMaximum(NamedTuple):
    argmax: complex
    value: float


def _panel_rules(fn: Callable, lefts: np.ndarray, rights: np.ndarray):
    """Kronrod value and |Kronrod - Gauss| for each panel [lefts[i], rights[i]]"""
    half = 0.5 * (rights - lefts)
    centers = 0.5 * (rights + lefts)
    nodes = centers[:, None] + half[:, None] * KRONROD_NODES[None, :]
    values = np.asarray(fn(nodes.ravel()), dtype=float).reshape(nodes.shape)
    kronrod = half * (values @ KRONROD_WEIGHTS)
    gauss = half * (values @ GAUSS_WEIGHTS)
    return kronrod, np.abs(kronrod - gauss)


def _midpoint_panel(fn: Callable, left: float, right: float):
    """Composite midpoint rule for panels around a log singularity"""
    cells = 16
    width = (right - left) / cells
    mids = left + width * (np.arange(cells) + 0.5)
    values = np.asarray(fn(mids), dtype=float)
    fine = width * float(np.sum(values))
    coarse_width = 2.0 * width
    coarse_mids = left + coarse_width * (np.arange(cells // 2) + 0.5)
    coarse = coarse_width * float(np.sum(np.asarray(fn(coarse_mids), dtype=float)))
    return fine, abs(fine - coarse)


def _guard_split(guard: Callable, cfg: QuadratureConfig, breakpoints: List[float]) -> List[tuple]:
    """
    Split panels whose guard minimum is below threshold down to guard_min_width.

    Returns (left, right, singular) triples in interval order.
    """
    pending = [(breakpoints[i], breakpoints[i + 1]) for i in range(len(breakpoints) - 1)]
    done = []
    while pending:
        left, right = pending.pop()
        nodes = 0.5 * (left + right) + 0.5 * (right - left) * KRONROD_NODES
        near_zero = float(np.min(np.abs(guard(nodes)))) < cfg.guard_threshold
        if near_zero and (right - left) > cfg.guard_min_width:
            mid = 0.5 * (left + right)
            pending.extend([(left, mid), (mid, right)])
        else:
            done.append((left, right, near_zero))
    done.sort()
    return done


def adaptive_integrate(fn: Callable, a: float, b: float, cfg: QuadratureConfig,
                       breakpoints: Optional[Sequence[float]] = None,
                       guard: Optional[Callable] = None) -> QuadratureResult:
    """
    Adaptive Gauss-Kronrod integral of fn over [a, b].

    Args:
        fn: Vectorized integrand
        a, b: Interval, a < b
        cfg: Tolerances and panel limits
        breakpoints: Optional initial panel boundaries (must include a and b)
        guard: Optional vectorized function checked against cfg.guard_threshold
            when cfg.singularity_guard is set

    Raises:
        QuadratureConvergenceError: tolerance not met within max_subdivisions
    """
    if breakpoints is None:
        breakpoints = list(np.linspace(a, b, cfg.initial_panels + 1))
    else:
        breakpoints = sorted(float(x) for x in breakpoints)

    if cfg.singularity_guard and guard is not None:
        triples = _guard_split(guard, cfg, breakpoints)
    else:
        triples = [(breakpoints[i], breakpoints[i + 1], False) for i in range(len(breakpoints) - 1)]

    # panel id -> [left, right, value, error, singular]; singular panels keep
    # using the midpoint rule when they are bisected
    panels = {}
    heap = []
    next_id = itertools.count()

    def add_panel(left: float, right: float, value: float, error: float, singular: bool) -> None:
        pid = next(next_id)
        panels[pid] = [left, right, value, error, singular]
        heapq.heappush(heap, (-error, pid))

    regular = [(l, r) for l, r, singular in triples if not singular]
    if regular:
        lefts = np.array([p[0] for p in regular])
        rights = np.array([p[1] for p in regular])
        values, errors = _panel_rules(fn, lefts, rights)
        for left, right, value, error in zip(lefts, rights, values, errors):
            add_panel(float(left), float(right), float(value), float(error), False)
    for left, right, singular in triples:
        if singular:
            add_panel(left, right, *_midpoint_panel(fn, left, right), True)

    while True:
        total = math.fsum(p[2] for p in panels.values())
        total_error = math.fsum(p[3] for p in panels.values())
        if not math.isfinite(total):
            raise QuadratureConvergenceError("integrand produced non-finite values", total, total_error)
        if total_error <= max(cfg.abs_tol, cfg.rel_tol * abs(total)):
            break
        if len(panels) >= cfg.max_subdivisions or not heap:
            raise QuadratureConvergenceError(
                f"tolerance not reached with {len(panels)} panels "
                f"(estimate {total!r}, error {total_error:.3e})",
                total, total_error,
            )
        _, pid = heapq.heappop(heap)
        left, right, value, error, singular = panels.pop(pid)
        mid = 0.5 * (left + right)
        if not (left < mid < right):
            # Panel cannot be split further in floating point; keep it, unrefined
            panels[pid] = [left, right, value, error, singular]
            continue
        if singular:
            add_panel(left, mid, *_midpoint_panel(fn, left, mid), True)
            add_panel(mid, right, *_midpoint_panel(fn, mid, right), True)
            continue
        values, errors = _panel_rules(fn, np.array([left, mid]), np.array([mid, right]))
        add_panel(left, mid, float(values[0]), float(errors[0]), False)
        add_panel(mid, right, float(values[1]), float(errors[1]), False)

    ordered = sorted(panels.values(), key=lambda p: p[0])
    value = math.fsum(p[2] for p in ordered)
    error = math.fsum(p[3] for p in ordered)
    return QuadratureResult(value, error, len(ordered))


def circle_integral(integrand: Callable, cfg: QuadratureConfig,
                    guard: Optional[Callable] = None) -> QuadratureResult:
    """
    Normalized circle mean (1/2pi) * integral_0^{2pi} integrand(theta) dtheta.

    Args:
        integrand: Vectorized function of theta
        cfg: Quadrature configuration
        guard: Optional function of theta (|f| for log integrands) used by
            the singularity guard
    """
    result = adaptive_integrate(integrand, 0.0, TWO_PI, cfg, guard=guard)
    return QuadratureResult(result.value / TWO_PI, result.error / TWO_PI, result.panels)


def _angular_means(integrand: Callable, t: np.ndarray, cfg: QuadratureConfig,
                   gap_aware: bool = False) -> Tuple[np.ndarray, float]:
    """
    Mean over theta of integrand(sqrt(1 - t) e^{i theta}) for each t (doubling
    trapezoid). Also returns the largest last change among the radii that were
    still moving when ANGULAR_MAX_POINTS was reached, 0.0 when all converged.
    """
    radii = np.sqrt(np.clip(1.0 - t, 0.0, 1.0))
    gap = t[:, None]

    def sample(theta: np.ndarray) -> np.ndarray:
        z = radii[:, None] * np.exp(1j * theta)[None, :]
        values = integrand(z, np.broadcast_to(gap, z.shape)) if gap_aware else integrand(z)
        return np.asarray(values, dtype=float)

    n = ANGULAR_START_POINTS
    means = sample(TWO_PI * np.arange(n) / n).mean(axis=1)
    moving = np.ones(means.shape, dtype=bool)
    change = np.zeros(means.shape)
    while n < ANGULAR_MAX_POINTS:
        extra = sample(TWO_PI * (np.arange(n) + 0.5) / n)
        refined = 0.5 * (means + extra.mean(axis=1))
        n *= 2
        change = np.abs(refined - means)
        means = refined
        moving = change > 0.1 * (cfg.rel_tol * np.abs(refined) + cfg.abs_tol)
        if not moving.any():
            break
    residual = float(np.max(change[moving])) if moving.any() else 0.0
    return means, residual


def disc_integral(integrand: Callable, cfg: QuadratureConfig, gap_aware: bool = False) -> QuadratureResult:
    """
    Area integral over the unit disc against dxdy/pi.

    With t = 1 - r^2 the measure becomes dt dtheta/(2pi), so the result is the
    t-integral over [0, 1] of the angular mean at radius sqrt(1 - t). The
    caller passes the full (weighted) integrand as a function of complex z.

    Args:
        integrand: Vectorized function of z, or of (z, gap) when gap_aware
        cfg: Quadrature configuration
        gap_aware: Pass gap = 1 - |z|^2 computed exactly from t as a second
            argument; weights like gap^(alpha - 2) must use it near the
            circle, where 1 - abs(z)**2 cancels to zero

    Raises:
        QuadratureConvergenceError: the radial rule missed its tolerance, or
            an angular mean still moving at ANGULAR_MAX_POINTS pushes the
            combined error estimate past it
    """
    breakpoints = [0.0] + [2.0 ** -k for k in range(RADIAL_GRADING_LEVELS, 0, -1)] + [1.0]
    angular = [0.0]

    def radial(t: np.ndarray) -> np.ndarray:
        means, residual = _angular_means(integrand, t, cfg, gap_aware)
        angular[0] = max(angular[0], residual)
        return means

    result = adaptive_integrate(radial, 0.0, 1.0, cfg, breakpoints=breakpoints)
    # t runs over a unit interval, so the largest angular residual bounds its share
    error = result.error + angular[0]
    if error > max(cfg.abs_tol, cfg.rel_tol * abs(result.value)):
        raise QuadratureConvergenceError(
            f"angular means did not settle within {ANGULAR_MAX_POINTS} points "
            f"(estimate {result.value!r}, error {error:.3e})",
            result.value, error,
        )
    return QuadratureResult(result.value, error, result.panels)


def bracketed_root(fn: Callable[[float], float], lo: float, hi: float, tol: float = 1e-14) -> float:
    """
    Root of fn in [lo, hi] by Brent's method (bisection with secant/inverse
    quadratic steps).

    Raises:
        BracketError: fn(lo) and fn(hi) have the same strict sign
    """
    f_lo = float(fn(lo))
    f_hi = float(fn(hi))
    if f_lo == 0.0:
        return float(lo)
    if f_hi == 0.0:
        return float(hi)
    if f_lo * f_hi > 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f(lo)={f_lo:.3e}, f(hi)={f_hi:.3e}")
    return float(brentq(fn, lo, hi, xtol=tol, rtol=4.0 * np.finfo(float).eps, maxiter=500))


def maximize_on_disc(objective: Callable, cfg: Optional[QuadratureConfig] = None,
                     grid: int = 256, restarts: int = 8, seed: int = 0,
                     step_tol: float = 1e-10) -> DiscMaximum:
    """
    Maximize a continuous objective on the closed unit disc.

    A polar grid scan (grid x grid) seeds a Nelder-Mead refinement; `restarts`
    additional random starting points guard against local maxima.

    Args:
        objective: Vectorized function of complex z, nonnegative, -> 0 at |z| = 1
        cfg: Unused by the search itself; accepted so callers pass one config around
        grid: Radial and angular grid size
        restarts: Number of extra random starts
        seed: Seed for the restart points (deterministic)
        step_tol: Simplex size at which refinement stops
    """
    radii = np.arange(grid) / grid
    theta = TWO_PI * np.arange(grid) / grid
    points = radii[:, None] * np.exp(1j * theta)[None, :]
    values = np.asarray(objective(points), dtype=float)
    flat_index = int(np.argmax(values))
    best_point = complex(points.ravel()[flat_index])
    best_value = float(values.ravel()[flat_index])

    def negative(xy: np.ndarray) -> float:
        z = complex(xy[0], xy[1])
        modulus = abs(z)
        if modulus >= 1.0:
            return modulus - 1.0
        return -float(objective(np.array([z]))[0])

    rng = np.random.default_rng(seed)
    starts = [best_point]
    for _ in range(restarts):
        radius = math.sqrt(rng.uniform())
        starts.append(radius * complex(math.cos(TWO_PI * rng.uniform()), math.sin(TWO_PI * rng.uniform())))

    step = 2.0 / grid
    for start in starts:
        x0 = np.array([start.real, start.imag])
        simplex = np.array([x0, x0 + [step, 0.0], x0 + [0.0, step]])
        result = minimize(
            negative, x0, method='Nelder-Mead',
            options={'initial_simplex': simplex, 'xatol': step_tol, 'fatol': 1e-16, 'maxiter': 4000},
        )
        candidate = complex(result.x[0], result.x[1])
        if abs(candidate) < 1.0 and -result.fun > best_value:
            best_point, best_value = candidate, float(-result.fun)

    logger.debug(f"disc maximum {best_value:.12g} at {best_point:.6g}")
    return DiscMaximum(best_point, best_value)
