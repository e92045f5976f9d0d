#!/usr/bin/env python3
"""
Tests for level sets of |g|^2 (1 - |z|^2): normalization, ray crossings,
the radial integral and the hyperbolic measure
Run with: pytest tests/test_levelsets.py
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add app to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import DomainError, PreconditionError
from app.functions import AnalyticPolynomial, weighted_pullback
from app.levelsets import (build_probe, lambda_grid, levelset_measure, levelset_u2,
                           normalize_to_origin, phi, r_star, radial_grid,
                           radial_levelset_integral, ray_slices, weak_type_margin, weak_type_ratio)
from app.norms import u_functional
from app.quadrature import QuadratureConfig

CFG = QuadratureConfig(abs_tol=1e-8, rel_tol=1e-8)
MEDIUM = QuadratureConfig(abs_tol=1e-6, rel_tol=1e-6)
CONSTANT = weighted_pullback(AnalyticPolynomial([1]), 0)
NORMALIZED_ONE_PLUS_Z = AnalyticPolynomial([1, 1]).normalized()


@pytest.fixture(scope="module")
def one_plus_z_probe_function():
    return normalize_to_origin(NORMALIZED_ONE_PLUS_Z, CFG)


def test_radial_grid_layout():
    grid = radial_grid()
    assert grid[0] == 0.0
    assert grid[-1] == 1.0
    assert np.all(np.diff(grid) > 0)
    assert 1.0 - grid[-2] == pytest.approx(1e-9)
    with pytest.raises(DomainError):
        radial_grid(2)


# ============================================================================
# Normalization to the origin
# ============================================================================

def test_normalize_constant():
    g = normalize_to_origin(AnalyticPolynomial([1]), CFG)
    assert abs(g.w) < 1e-6
    assert phi(g, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_normalize_one_plus_z(one_plus_z_probe_function):
    g = one_plus_z_probe_function
    # max of |1 + z|^2 (1 - |z|^2) / 2 is (3/2)^3 (1/2) / 2
    assert phi(g, 0.0) == pytest.approx(0.84375, abs=1e-9)
    assert g.w == pytest.approx(0.5, abs=1e-4)


def test_normalized_peak_is_at_most_one():
    rng = np.random.default_rng(4)
    f = AnalyticPolynomial(rng.standard_normal(5) + 1j * rng.standard_normal(5)).normalized()
    g = normalize_to_origin(f, CFG)
    assert phi(g, 0.0) <= 1.0 + 1e-12
    points = 0.95 * np.exp(1j * np.linspace(0, 2 * np.pi, 50))
    assert max(phi(g, z) for z in points) <= phi(g, 0.0) * (1 + 1e-9)


def test_normalize_zero_polynomial():
    with pytest.raises(DomainError):
        normalize_to_origin(AnalyticPolynomial([0]), CFG)


# ============================================================================
# Crossings
# ============================================================================

def test_r_star_for_constant():
    for theta in (0.0, 1.0, 4.0):
        assert r_star(CONSTANT, theta, 0.5) == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_r_star_empty_level_set():
    assert r_star(CONSTANT, 0.3, 1.0) is None
    assert r_star(CONSTANT, 0.3, 1.5) is None


def test_r_star_rejects_nonpositive_lambda():
    with pytest.raises(DomainError):
        r_star(CONSTANT, 0.0, 0.0)


def test_crossing_residuals(one_plus_z_probe_function):
    g = one_plus_z_probe_function
    lam = 0.4 * phi(g, 0.0)
    probe = build_probe(g, lam, np.linspace(0, 2 * np.pi, 24, endpoint=False))
    assert probe.max_residual() <= 1e-10
    assert probe.peak == pytest.approx(phi(g, 0.0))
    for k in range(len(probe.thetas)):
        slices = probe.slices(k)
        assert slices and slices[0][0] == 0.0


def test_crossing_on_a_grid_node():
    # Phi of the constant is exactly 1 - r^2, so this lambda vanishes on node 700
    node = float(radial_grid()[700])
    lam = 1.0 - node * node
    assert r_star(CONSTANT, 0.0, lam) == pytest.approx(node, abs=1e-12)
    slices = ray_slices(CONSTANT, 0.0, lam)
    assert len(slices) == 1
    assert slices[0][0] == 0.0
    assert slices[0][1] == pytest.approx(node, abs=1e-12)


def test_crossings_on_grid_nodes_keep_slices_in_phase():
    # f = z: Phi = r^2 (1 - r^2); pick lambda so the inner crossing is a grid node
    f = weighted_pullback(AnalyticPolynomial([0, 1]), 0)
    node = float(radial_grid()[400])
    lam = node * node * (1.0 - node * node)
    slices = ray_slices(f, 0.0, lam)
    assert len(slices) == 1
    inner, outer = slices[0]
    assert inner == pytest.approx(node, abs=1e-12)
    assert outer == pytest.approx(math.sqrt(1.0 - node * node), abs=1e-12)


def test_ray_slices_with_two_crossings():
    # f = z: Phi = r^2 (1 - r^2) crosses 0.2 twice on every ray and the origin is outside
    f = weighted_pullback(AnalyticPolynomial([0, 1]), 0)
    slices = ray_slices(f, 0.7, 0.2)
    assert len(slices) == 1
    inner, outer = slices[0]
    roots = sorted(math.sqrt((1 + s * math.sqrt(1 - 0.8)) / 2) for s in (-1, 1))
    assert inner == pytest.approx(roots[0], abs=1e-12)
    assert outer == pytest.approx(roots[1], abs=1e-12)


# ============================================================================
# Radial integral and measure
# ============================================================================

@pytest.mark.parametrize("lam", [0.1, 0.5, 0.9])
def test_radial_integral_of_constant(lam):
    result = radial_levelset_integral(CONSTANT, lam, CFG)
    assert result.value == pytest.approx(1.0, abs=1e-8)
    assert result.empty_rays == 0


def test_radial_integral_requires_lambda_below_peak():
    with pytest.raises(PreconditionError):
        radial_levelset_integral(CONSTANT, 1.0, CFG)


def test_radial_integral_small_lambda_tends_to_norm(one_plus_z_probe_function):
    g = one_plus_z_probe_function
    assert radial_levelset_integral(g, 1e-4, MEDIUM).value == pytest.approx(1.0, abs=1e-2)


@pytest.mark.slow
def test_radial_integral_monotone_for_one_plus_z(one_plus_z_probe_function):
    g = one_plus_z_probe_function
    peak = phi(g, 0.0)
    values = [radial_levelset_integral(g, lam, MEDIUM).value for lam in (0.9 * peak, 0.5 * peak, 0.1 * peak)]
    assert values[0] <= values[1] + 1e-8
    assert values[1] <= values[2] + 1e-8


@pytest.mark.parametrize("lam, expected", [(0.5, 1.0), (0.25, 3.0), (0.8, 0.25)])
def test_measure_of_constant(lam, expected):
    assert levelset_measure(CONSTANT, lam, CFG) == pytest.approx(expected, rel=1e-8)


def test_measure_above_peak_is_zero():
    assert levelset_measure(CONSTANT, 1.0, CFG) == 0.0
    assert levelset_measure(CONSTANT, 3.0, CFG) == 0.0


def test_measure_of_annulus_for_z():
    # E = {r1 < r < r2}, measure 1/(1 - r2^2) - 1/(1 - r1^2)
    f = weighted_pullback(AnalyticPolynomial([0, 1]), 0)
    lam = 0.2
    r1_sq, r2_sq = (1 - math.sqrt(0.2)) / 2, (1 + math.sqrt(0.2)) / 2
    expected = 1 / (1 - r2_sq) - 1 / (1 - r1_sq)
    assert levelset_measure(f, lam, CFG) == pytest.approx(expected, rel=1e-8)


def test_measure_nonincreasing_in_lambda(one_plus_z_probe_function):
    g = one_plus_z_probe_function
    peak = phi(g, 0.0)
    values = [levelset_measure(g, peak * t, MEDIUM) for t in (0.2, 0.4, 0.6, 0.8)]
    for larger, smaller in zip(values, values[1:]):
        assert smaller <= larger + 1e-6


@pytest.mark.slow
def test_level_set_form_of_u2(one_plus_z_probe_function):
    g = one_plus_z_probe_function
    loose = QuadratureConfig(abs_tol=1e-6, rel_tol=1e-6)
    expected = u_functional(NORMALIZED_ONE_PLUS_Z, 2, CFG, check_derivative=False).value
    assert levelset_u2(g, loose) == pytest.approx(expected, rel=1e-3)


# ============================================================================
# Weak-type margin
# ============================================================================

def test_weak_type_margin_of_constant_is_zero():
    assert weak_type_margin(AnalyticPolynomial([1]), 0.5, CFG) == pytest.approx(0.0, abs=1e-4)


def test_weak_type_margin_with_empty_level_set():
    # f = z has max Phi = 1/4
    assert weak_type_margin(AnalyticPolynomial([0, 1]), 0.5, CFG) == 1.0


def test_weak_type_margin_requires_normalized_input():
    with pytest.raises(PreconditionError):
        weak_type_margin(AnalyticPolynomial([1, 1]), 0.5, CFG)


def test_weak_type_margin_one_plus_z(one_plus_z_probe_function):
    margin = weak_type_margin(NORMALIZED_ONE_PLUS_Z, 0.5, MEDIUM, g=one_plus_z_probe_function)
    assert margin >= -1e-4
    ratio = weak_type_ratio(one_plus_z_probe_function, 0.5, MEDIUM)
    assert 0 < ratio <= 1 + 1e-4


def test_lambda_grid():
    grid = lambda_grid(1.0, 0.5, 3)
    assert grid == pytest.approx([0.5, 0.25, 0.125])
    with pytest.raises(DomainError):
        lambda_grid(1.0, 1.5, 3)
