#!/usr/bin/env python3
"""
Level sets of the invariant quantity Phi_g(z) = |g(z)|^2 (1 - |z|^2)

A function is first moved so Phi attains its maximum at the origin
(normalize_to_origin). Along each ray from the origin every crossing of
Phi_g = lambda is located by a radial grid scan plus Brent refinement; the
slices where Phi_g > lambda then give the hyperbolic measure of
E_g(lambda) through the exact radial antiderivative 1/(1 - r^2), leaving a
single angular integral.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from app.errors import DomainError, PreconditionError, SelfCheckError
from app.functions import PullbackFunction, invariant_quantity, weighted_pullback
from app.quadrature import (QuadratureConfig, adaptive_integrate, bracketed_root,
                            circle_integral, maximize_on_disc)

logger = logging.getLogger(__name__)

RADIAL_GRID_POINTS = 2048
# Grid splits into a uniform part on [0, 0.99] and a part geometric in 1 - r
BOUNDARY_LAYER = 1e-2
INNERMOST_GAP = 1e-9
MAXIMUM_CHECK_POINTS = 100
MAXIMUM_SLACK = 1e-9


@lru_cache(maxsize=8)
def radial_grid(points: int = RADIAL_GRID_POINTS) -> np.ndarray:
    """Scan radii on [0, 1]; the last point is 1 where Phi vanishes"""
    if points < 4:
        raise DomainError(f"radial grid needs at least 4 points, got {points}")
    half = points // 2
    uniform = np.linspace(0.0, 1.0 - BOUNDARY_LAYER, half, endpoint=False)
    gaps = np.geomspace(BOUNDARY_LAYER, INNERMOST_GAP, points - half)
    grid = np.concatenate((uniform, 1.0 - gaps, [1.0]))
    grid.setflags(write=False)
    return grid


@dataclass(frozen=True)
class LevelSetProbe:
    """
    Crossings of Phi_g = lambda along a fixed set of rays.

    crossings[k] holds the sorted crossing radii on the ray at thetas[k].
    """

    g: PullbackFunction
    lam: float
    thetas: Tuple[float, ...]
    crossings: Tuple[Tuple[float, ...], ...]

    @property
    def peak(self) -> float:
        return phi(self.g, 0.0)

    def slices(self, k: int) -> List[Tuple[float, float]]:
        return ray_slices(self.g, self.thetas[k], self.lam, self.crossings[k])

    def max_residual(self) -> float:
        residuals = [
            abs(phi(self.g, r * np.exp(1j * theta)) - self.lam)
            for theta, radii in zip(self.thetas, self.crossings)
            for r in radii
        ]
        return max(residuals, default=0.0)


class RadialIntegral(NamedTuple):
    """Value of the radial level-set integral; empty_rays counts rays with no crossing"""
    value: float
    empty_rays: int


def phi(g, z) -> float:
    return float(invariant_quantity(g, np.asarray([z]))[0])


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not lam > 0 or not math.isfinite(lam):
        raise DomainError(f"lambda must be a positive real, got {lam}")
    return lam


def normalize_to_origin(f, cfg: QuadratureConfig, seed: int = 0) -> PullbackFunction:
    """
    Pull f back so that Phi attains its maximum at the origin.

    Args:
        f: AnalyticPolynomial, not identically zero
        cfg: Quadrature configuration passed to the maximizer
        seed: Seed for the maximizer restarts and the verification points

    Raises:
        DomainError: f is identically zero
        SelfCheckError: a random point beats the maximum
    """
    if f.is_zero():
        raise DomainError("cannot normalize the zero polynomial")
    best = maximize_on_disc(lambda z: invariant_quantity(f, z), cfg, seed=seed)
    g = weighted_pullback(f, best.argmax)

    rng = np.random.default_rng(seed)
    radii = np.sqrt(rng.uniform(size=MAXIMUM_CHECK_POINTS))
    points = radii * np.exp(2j * math.pi * rng.uniform(size=MAXIMUM_CHECK_POINTS))
    peak = phi(g, 0.0)
    worst = float(np.max(invariant_quantity(g, points)))
    if worst > peak * (1.0 + MAXIMUM_SLACK):
        raise SelfCheckError(f"maximization failed: Phi_g(0)={peak!r} but a sample reaches {worst!r}")
    logger.debug(f"normalized to origin with w={best.argmax:.6g}, Phi max {peak:.12g}")
    return g


def ray_crossings(g, theta: float, lam: float, grid_points: int = RADIAL_GRID_POINTS) -> Tuple[float, ...]:
    """All radii on the ray at theta where Phi_g = lam, sorted ascending"""
    grid = radial_grid(grid_points)
    direction = complex(math.cos(theta), math.sin(theta))
    excess = invariant_quantity(g, grid * direction) - lam
    excess[-1] = -lam

    def along_ray(r: float) -> float:
        return phi(g, r * direction) - lam

    # nodes where Phi_g == lam exactly are skipped; a sign change across them
    # is bracketed by the nearest nonzero neighbours, which counts it once
    signs = np.sign(excess)
    nonzero = np.flatnonzero(signs)
    changes = np.flatnonzero(signs[nonzero[:-1]] != signs[nonzero[1:]])
    return tuple(bracketed_root(along_ray, float(grid[nonzero[k]]), float(grid[nonzero[k + 1]]))
                 for k in changes)


def ray_slices(g, theta: float, lam: float,
               crossings: Optional[Sequence[float]] = None) -> List[Tuple[float, float]]:
    """Radial intervals on the ray at theta where Phi_g > lam"""
    if crossings is None:
        crossings = ray_crossings(g, theta, lam)
    inside = phi(g, 0.0) > lam
    edges = ([0.0] if inside else []) + list(crossings)
    return [(edges[k], edges[k + 1]) for k in range(0, len(edges) - 1, 2)]


def r_star(g, theta: float, lam: float, cfg: Optional[QuadratureConfig] = None) -> Optional[float]:
    """
    Largest radius on the ray at theta with Phi_g = lam, or None when the
    ray never reaches lam.
    """
    lam = _check_lambda(lam)
    crossings = ray_crossings(g, theta, lam)
    return crossings[-1] if crossings else None


def build_probe(g, lam: float, thetas: Sequence[float]) -> LevelSetProbe:
    lam = _check_lambda(lam)
    thetas = tuple(float(t) for t in thetas)
    return LevelSetProbe(g, lam, thetas, tuple(ray_crossings(g, t, lam) for t in thetas))


def _require_below_peak(g, lam: float) -> None:
    peak = phi(g, 0.0)
    if not lam < peak:
        raise PreconditionError(f"lambda={lam!r} must lie below Phi_g(0)={peak!r}")


def radial_levelset_integral(g, lam: float, cfg: QuadratureConfig) -> RadialIntegral:
    """
    (1/2pi) integral over theta of lambda / (1 - r*(theta)^2), which equals the
    circle mean of |g(r* e^{i theta})|^2. Rays without a crossing contribute 0.
    """
    lam = _check_lambda(lam)
    _require_below_peak(g, lam)
    empty = [0]

    def integrand(theta: np.ndarray) -> np.ndarray:
        values = np.empty(theta.shape)
        for k, angle in enumerate(theta):
            radius = r_star(g, float(angle), lam)
            if radius is None:
                empty[0] += 1
                values[k] = 0.0
            else:
                values[k] = lam / (1.0 - radius * radius)
        return values

    result = circle_integral(integrand, cfg)
    if empty[0]:
        logger.warning(f"{empty[0]} rays had no crossing at lambda={lam!r}")
    return RadialIntegral(result.value, empty[0])


def _ray_measure(g, theta: float, lam: float) -> float:
    total = 0.0
    for start, end in ray_slices(g, theta, lam):
        total += 1.0 / (1.0 - end * end) - 1.0 / (1.0 - start * start)
    return total


def levelset_measure(g, lam: float, cfg: QuadratureConfig) -> float:
    """
    Hyperbolic measure mu(E_g(lam)) with dmu = dxdy / (pi (1 - |z|^2)^2).

    Returns 0 when lam is at or above the maximum Phi_g(0).
    """
    lam = _check_lambda(lam)
    if lam >= phi(g, 0.0):
        return 0.0

    def integrand(theta: np.ndarray) -> np.ndarray:
        return np.array([_ray_measure(g, float(angle), lam) for angle in theta])

    return circle_integral(integrand, cfg).value


def weak_type_margin(f, lam: float, cfg: QuadratureConfig, g: Optional[PullbackFunction] = None) -> float:
    """
    (1/lam - 1) - mu(E_f(lam)) for f of unit H^2 norm.

    The measure is Moebius invariant, so it is computed on the normalized
    pullback g (pass it in to reuse one normalization over several lambdas).
    """
    lam = _check_lambda(lam)
    if abs(f.l2_norm() - 1.0) > 1e-10:
        raise PreconditionError(f"f must have unit H^2 norm, got {f.l2_norm()!r}")
    if g is None:
        g = normalize_to_origin(f, cfg)
    return (1.0 / lam - 1.0) - levelset_measure(g, lam, cfg)


def weak_type_ratio(g, lam: float, cfg: QuadratureConfig) -> float:
    """mu(E_g(lam)) / (1/lam - 1), the ratio bounded by a universal constant"""
    lam = _check_lambda(lam)
    if not lam < 1:
        raise DomainError(f"weak type ratio needs lambda < 1, got {lam}")
    return levelset_measure(g, lam, cfg) / (1.0 / lam - 1.0)


def levelset_u2(g, cfg: QuadratureConfig) -> float:
    """
    2 * integral_0^{max Phi} lambda mu(E_g(lambda)) dlambda, the level-set
    form of U_g(2).
    """
    peak = phi(g, 0.0)

    def integrand(lams: np.ndarray) -> np.ndarray:
        return np.array([2.0 * lam * levelset_measure(g, float(lam), cfg) for lam in lams])

    outer = QuadratureConfig(
        abs_tol=max(cfg.abs_tol, 1e-8),
        rel_tol=max(cfg.rel_tol, 1e-6),
        max_subdivisions=cfg.max_subdivisions,
        initial_panels=4,
    )
    return adaptive_integrate(integrand, 0.0, peak, outer).value


def lambda_grid(peak: float, ratio: float = 0.9, steps: int = 20) -> List[float]:
    """Geometric grid peak * ratio^k, k = 1..steps"""
    if not 0 < ratio < 1:
        raise DomainError(f"lambda ratio must lie in (0, 1), got {ratio}")
    return [peak * ratio ** k for k in range(1, steps + 1)]
