#!/usr/bin/env python3
"""
Tests for adaptive circle/disc quadrature, root bracketing and disc maximization
Run with: pytest tests/test_quadrature.py
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add app to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import BracketError, DomainError, QuadratureConvergenceError
from app.functions import AnalyticPolynomial, invariant_quantity
from app.quadrature import (QuadratureConfig, adaptive_integrate, bracketed_root, circle_integral,
                            disc_integral, maximize_on_disc)

CFG = QuadratureConfig()


# ============================================================================
# Circle integrals
# ============================================================================

def test_circle_integral_of_constant():
    assert circle_integral(lambda t: np.ones_like(t), CFG).value == pytest.approx(1.0, abs=1e-14)


def test_circle_integral_parseval_for_one_plus_z():
    result = circle_integral(lambda t: np.abs(1 + np.exp(1j * t)) ** 2, CFG)
    assert result.value == pytest.approx(2.0, abs=1e-13)


def test_circle_integral_of_modulus_with_kink():
    result = circle_integral(lambda t: np.abs(1 + np.exp(1j * t)), CFG)
    assert result.value == pytest.approx(4 / math.pi, abs=1e-10)
    assert result.error <= 1e-10


def test_circle_rule_exact_for_trig_polynomials():
    rng = np.random.default_rng(2)
    coeffs = rng.standard_normal(9)

    def integrand(t):
        return sum(c * np.cos(k * t) for k, c in enumerate(coeffs))

    assert circle_integral(integrand, CFG).value == pytest.approx(coeffs[0], abs=1e-13)


def test_log_singularity_with_guard():
    # (1/2pi) integral of log|1 + e^{it}| = 0 (zero of 1+z on the circle)
    def integrand(t):
        with np.errstate(divide='ignore'):
            return np.log(np.abs(1 + np.exp(1j * t)))

    guard = lambda t: np.abs(1 + np.exp(1j * t))
    result = circle_integral(integrand, CFG.guarded(), guard=guard)
    assert result.value == pytest.approx(0.0, abs=1e-8)


def test_log_singularity_inside_a_panel():
    # zero of 1 - e^{-0.3i} z at t = 0.3, away from the initial breakpoints
    shift = 0.3

    def modulus(t):
        return np.abs(1 - np.exp(1j * (t - shift)))

    def integrand(t):
        with np.errstate(divide='ignore'):
            return np.log(modulus(t))

    cfg = QuadratureConfig(abs_tol=1e-9, rel_tol=1e-9, max_subdivisions=8000).guarded()
    assert circle_integral(integrand, cfg, guard=modulus).value == pytest.approx(0.0, abs=1e-7)


def test_adaptive_integrate_breakpoints_and_polynomial():
    result = adaptive_integrate(lambda x: 3 * x ** 2, 0.0, 2.0, CFG, breakpoints=[0.0, 0.5, 2.0])
    assert result.value == pytest.approx(8.0, rel=1e-14)
    assert result.panels >= 2


def test_convergence_failure_carries_estimate():
    cfg = QuadratureConfig(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=20)
    with pytest.raises(QuadratureConvergenceError) as info:
        adaptive_integrate(lambda x: 1 / np.sqrt(x), 0.0, 1.0, cfg)
    assert info.value.estimate is not None
    assert info.value.estimate == pytest.approx(2.0, rel=0.05)


def test_tightening_does_not_move_value_beyond_error():
    integrand = lambda t: np.abs(1 + 0.9 * np.exp(1j * t)) ** 0.7
    loose = circle_integral(integrand, QuadratureConfig(abs_tol=1e-6, rel_tol=1e-6))
    tight = circle_integral(integrand, QuadratureConfig(abs_tol=1e-6, rel_tol=1e-6).tightened(2))
    assert abs(loose.value - tight.value) <= loose.error + 1e-15


def test_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(abs_tol=0)
    with pytest.raises(DomainError):
        QuadratureConfig(max_subdivisions=0)
    tight = CFG.tightened(100)
    assert tight.abs_tol == pytest.approx(1e-12)
    assert tight.max_subdivisions == 4 * CFG.max_subdivisions
    assert CFG.guarded().singularity_guard


# ============================================================================
# Disc integrals
# ============================================================================

def test_disc_integral_examples():
    assert disc_integral(lambda z: np.ones(z.shape), CFG).value == pytest.approx(1.0, abs=1e-12)
    assert disc_integral(lambda z: np.abs(z) ** 2, CFG).value == pytest.approx(0.5, abs=1e-12)


def test_disc_integral_kinked_in_theta():
    # |Re z| = r |cos theta| has kinks the angular trapezoid only resolves to ~1e-8
    exact = 4 / (3 * math.pi)
    loose = QuadratureConfig(abs_tol=1e-6, rel_tol=1e-6)
    result = disc_integral(lambda z: np.abs(z.real), loose)
    assert result.value == pytest.approx(exact, abs=1e-6)
    assert result.error <= 1e-6
    tight = QuadratureConfig(abs_tol=1e-12, rel_tol=1e-12)
    with pytest.raises(QuadratureConvergenceError) as info:
        disc_integral(lambda z: np.abs(z.real), tight)
    assert info.value.error > 1e-12
    assert abs(info.value.estimate - exact) < 1e-6


@pytest.mark.parametrize("alpha", [1.5, 2.0, 2.5, 3.0, 4.0])
def test_bergman_weight_has_unit_mass(alpha):
    def weight(z, gap):
        return (alpha - 1) * gap ** (alpha - 2)

    assert disc_integral(weight, CFG, gap_aware=True).value == pytest.approx(1.0, abs=1e-8)


# ============================================================================
# Roots and maximization
# ============================================================================

def test_bracketed_root_examples():
    assert bracketed_root(lambda r: 1 - r * r - 0.5, 0.0, 1.0) == pytest.approx(math.sqrt(0.5), abs=1e-13)
    assert bracketed_root(lambda r: r - 0.3, 0.0, 1.0) == pytest.approx(0.3, abs=1e-14)
    with pytest.raises(BracketError):
        bracketed_root(lambda r: r * r + 1, 0.0, 1.0)


def test_maximize_constant_function():
    f = AnalyticPolynomial([1])
    best = maximize_on_disc(lambda z: invariant_quantity(f, z), CFG)
    assert abs(best.argmax) < 1e-6
    assert best.value == pytest.approx(1.0, abs=1e-12)


def test_maximize_identity_function():
    f = AnalyticPolynomial([0, 1])
    best = maximize_on_disc(lambda z: invariant_quantity(f, z), CFG)
    assert best.value == pytest.approx(0.25, abs=1e-12)
    assert abs(best.argmax) == pytest.approx(math.sqrt(0.5), abs=1e-5)


def test_maximize_one_plus_z_against_dense_grid():
    f = AnalyticPolynomial([1, 1])
    best = maximize_on_disc(lambda z: invariant_quantity(f, z), CFG)
    radii = np.arange(2048) / 2048
    theta = 2 * np.pi * np.arange(512) / 512
    oracle = float(np.max(invariant_quantity(f, radii[:, None] * np.exp(1j * theta)[None, :])))
    # real-axis maximum (1 + x)^3 (1 - x) at x = 1/2
    assert best.value == pytest.approx(1.6875, abs=1e-10)
    assert best.value >= oracle - 1e-12
    assert best.value - oracle <= 1e-6
