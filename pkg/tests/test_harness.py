#!/usr/bin/env python3
"""
Tests for inequality margins, seeded campaigns, the necessity fit and the
extremal search
Run with: pytest tests/test_harness.py
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add app to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import DomainError
from app.functions import AnalyticPolynomial, TrigPolynomial
from app.harness import (NO_ZERO_FREE_SAMPLE, ConjectureReport, InequalityKind, TrialOptions,
                         TrialRecord, duality_pairs, evaluate_sides, extremal_search,
                         known_riesz_exponent, necessity_check, riesz_exponent, run_campaign,
                         run_trial)
from app.quadrature import QuadratureConfig
from app.sampling import SamplerSpec

CFG = QuadratureConfig()
FINE = QuadratureConfig(abs_tol=1e-12, rel_tol=1e-12)
LOOSE = QuadratureConfig(abs_tol=1e-7, rel_tol=1e-7)
ONE_PLUS_Z = AnalyticPolynomial([1, 1])
EPS = (0.02, 0.04, 0.06, 0.08, 0.1)


def margin(kind, f, cfg=CFG):
    lhs, rhs = evaluate_sides(kind, f, cfg)
    return rhs - lhs


# ============================================================================
# Exponent bookkeeping
# ============================================================================

def test_riesz_exponents():
    assert riesz_exponent(math.inf) == 4.0
    assert riesz_exponent(2) == pytest.approx(2.0)
    assert riesz_exponent(4) == pytest.approx(3.0)
    assert known_riesz_exponent(2) == pytest.approx(2.0)


def test_duality_pairs():
    pairs = duality_pairs(4)
    assert pairs[0] == pytest.approx((4, 3))
    assert pairs[1] == pytest.approx((1.5, 4 / 3))


def test_kind_validation():
    with pytest.raises(DomainError):
        InequalityKind.burbea(2.5)
    with pytest.raises(DomainError):
        InequalityKind.dual(1.5)
    with pytest.raises(DomainError):
        InequalityKind.riesz(1.0)
    with pytest.raises(DomainError):
        InequalityKind.measure(1.0)
    with pytest.raises(DomainError):
        InequalityKind.logconvex(2.0)
    with pytest.raises(DomainError):
        InequalityKind.uf_monotone([1.0, 2.0])


def test_kind_params_and_quasi_norm_flag():
    kind = InequalityKind.riesz(1.2)
    assert kind.target_q == pytest.approx(2 / 3)
    assert kind.quasi_norm
    params = kind.params()
    assert params["r"] == 1.2
    assert params["quasi_norm"] is True
    assert InequalityKind.riesz(math.inf).params()["r"] == "inf"
    assert not InequalityKind.burbea(1.0).quasi_norm


# ============================================================================
# Margins on known functions
# ============================================================================

def test_burbea_margin_for_one_plus_z():
    assert margin(InequalityKind.burbea(1.0), ONE_PLUS_Z) == pytest.approx(4 / math.pi - math.sqrt(1.5), abs=1e-9)


def test_burbea_p2_is_an_identity():
    assert margin(InequalityKind.burbea(2.0), ONE_PLUS_Z) == pytest.approx(0.0, abs=1e-9)


def test_dual_margins_for_one_plus_z():
    assert margin(InequalityKind.dual(2.0), ONE_PLUS_Z) == pytest.approx(0.0, abs=1e-9)
    assert margin(InequalityKind.dual(4.0), ONE_PLUS_Z) == pytest.approx(math.sqrt(3) - 6 ** 0.25, abs=1e-9)


def test_riesz_margin_on_analytic_input():
    # P f = f, so the margin is ||f||_{L^r} - ||f||_{H^q} with q < r
    f = TrigPolynomial.from_analytic(ONE_PLUS_Z)
    assert margin(InequalityKind.riesz(4.0), f) >= 0


def test_riesz_geometric_margin():
    # P(1 + 2 cos t) = 1 + z has geometric mean 1, ||.||_1 of 1 + 2 cos t is above 1
    f = TrigPolynomial(-1, [1, 1, 1])
    assert margin(InequalityKind.riesz_geometric(), f, CFG.guarded()) > 0


def test_bergman_embed_margin_for_one_plus_z():
    # ||1 + z||_{A^4_2} = (10/3)^(1/4) against ||1 + z||_{H^2} = sqrt(2)
    expected = math.sqrt(2) - (10 / 3) ** 0.25
    assert margin(InequalityKind.bergman_embed(2.0), ONE_PLUS_Z) == pytest.approx(expected, abs=1e-9)


def test_riesz_known_margin_at_r2():
    # q = 2 at r = 2: ||1 + 2 cos t||_2 = sqrt(3) against ||1 + z||_{H^2} = sqrt(2)
    f = TrigPolynomial(-1, [1, 1, 1])
    kind = InequalityKind.riesz_known(2.0)
    assert kind.target_q == pytest.approx(2.0)
    assert margin(kind, f) == pytest.approx(math.sqrt(3) - math.sqrt(2), abs=1e-9)


def test_riesz_known_margin_at_infinity():
    kind = InequalityKind.riesz_known(math.inf)
    assert kind.target_q == 4.0
    assert margin(kind, TrigPolynomial(-1, [1, 1, 1])) > 0


def test_radial_monotone_margin_for_constant():
    # Phi of the constant peaks at 1 and every radial integral equals ||1||^2
    kind = InequalityKind.radial_monotone(0.5, 3)
    lhs, rhs = evaluate_sides(kind, AnalyticPolynomial([1]), QuadratureConfig(abs_tol=1e-8, rel_tol=1e-8))
    assert rhs == 0.0
    assert lhs == pytest.approx(0.0, abs=1e-7)


def test_interp_bound_margin_is_scaled_burbea():
    kind = InequalityKind.interp_bound(0.5)
    lhs, rhs = evaluate_sides(kind, ONE_PLUS_Z, CFG)
    assert rhs - lhs > 0


def test_logconvex_margin_is_nonnegative():
    kind = InequalityKind.logconvex(2.0, 3.0)
    spec = SamplerSpec.burbea(2.0, 4, master_seed=5)
    for trial in range(5):
        record = run_trial(kind, spec, trial, CFG)
        assert not record.failed
        assert record.margin >= -1e-12


# ============================================================================
# Campaigns
# ============================================================================

def test_run_trial_is_deterministic():
    kind = InequalityKind.burbea(1.0)
    spec = SamplerSpec.burbea(1.0, 6, master_seed=42)
    first = run_trial(kind, spec, 7, CFG)
    second = run_trial(kind, spec, 7, CFG)
    assert first == second
    assert first.elapsed_ms is None
    assert run_trial(kind, spec, 7, CFG, TrialOptions(timing=True)).elapsed_ms >= 0


def test_run_trial_rejects_sampler_mismatch():
    with pytest.raises(DomainError):
        run_trial(InequalityKind.riesz(4.0), SamplerSpec.burbea(1.0, 3), 0, CFG)
    with pytest.raises(DomainError):
        run_trial(InequalityKind.burbea(1.0), SamplerSpec.standard_trig(2, 2), 0, CFG)


def test_campaign_identical_across_thread_counts():
    kind = InequalityKind.burbea(1.0)
    spec = SamplerSpec.burbea(1.0, 6, master_seed=3)
    inline = run_campaign(kind, spec, 12, 1e-6, CFG, threads=1)
    for threads in (2, 4, 8):
        threaded = run_campaign(kind, spec, 12, 1e-6, CFG, threads=threads)
        assert inline.records == threaded.records
        assert [r.trial_index for r in threaded.records] == list(range(12))


def test_burbea_campaign_has_no_violations():
    report = run_campaign(InequalityKind.burbea(1.0), SamplerSpec.burbea(1.0, 8, master_seed=1),
                          20, 1e-6, CFG)
    assert report.trials == 20
    assert report.violations == 0
    assert report.failed_trials == 0
    assert report.min_margin >= -1e-6


def test_riesz_campaign_on_trig_samples():
    report = run_campaign(InequalityKind.riesz(4.0), SamplerSpec.standard_trig(3, 3, master_seed=2),
                          6, 1e-6, CFG)
    assert report.violations == 0
    assert all(record.min_degree == -3 for record in report.records)


def test_campaign_rejects_bad_trial_count():
    with pytest.raises(DomainError):
        run_campaign(InequalityKind.burbea(1.0), SamplerSpec.burbea(1.0, 2), 0, 1e-6, CFG)


def make_record(index, value, failed=False):
    return TrialRecord(InequalityKind.burbea(1.0), index, 0, 0.0, value, math.nan if failed else value,
                       (1 + 0j,), failed=failed, error="boom" if failed else None)


def test_worst_case_is_first_minimum_and_skips_failures():
    records = [make_record(0, 0.5), make_record(1, 0.1), make_record(2, 0.0, failed=True), make_record(3, 0.1)]
    report = ConjectureReport(InequalityKind.burbea(1.0), SamplerSpec.burbea(1.0, 0), 1e-6, CFG, records)
    assert report.worst_case.trial_index == 1
    assert report.min_margin == 0.1
    assert report.failed_trials == 1
    assert report.violations == 0
    assert report.statistics()["rechecked"] == 0


def test_record_function_round_trip():
    record = TrialRecord(InequalityKind.riesz(4.0), 0, 0, 1.0, 1.0, 0.0, (1 + 0j, 2 + 0j), min_degree=-1)
    f = record.function()
    assert isinstance(f, TrigPolynomial)
    assert f.min_degree == -1


@pytest.mark.slow
def test_uf_monotone_campaign():
    kind = InequalityKind.uf_monotone((1.5, 2.0, 3.0))
    report = run_campaign(kind, SamplerSpec.burbea(2.0, 3, master_seed=4), 3, 1e-6, LOOSE)
    assert report.trials == 3
    assert all(r.error != NO_ZERO_FREE_SAMPLE for r in report.records)
    assert report.violations == 0
    assert 0 < report.statistics()["acceptance_rate"] <= 1


@pytest.mark.slow
def test_radial_monotone_campaign():
    kind = InequalityKind.radial_monotone(0.8, 3)
    report = run_campaign(kind, SamplerSpec.burbea(2.0, 3, master_seed=8), 2, 1e-4, LOOSE)
    assert report.failed_trials == 0
    assert report.violations == 0


@pytest.mark.slow
def test_measure_campaign():
    kind = InequalityKind.measure(0.5)
    report = run_campaign(kind, SamplerSpec.burbea(2.0, 4, master_seed=6), 3, 1e-4, LOOSE)
    assert report.violations == 0
    assert report.statistics()["max_weak_type_ratio"] <= 1 + 1e-4


# ============================================================================
# Necessity fit
# ============================================================================

def test_necessity_negative_slope_is_consistent():
    result = necessity_check(4, 3.5, EPS, FINE)
    assert result.predicted == pytest.approx(-0.125)
    assert result.verdict == "CONSISTENT"
    assert result.slope < 0
    assert len(result.margins) == len(EPS)


def test_necessity_critical_exponent_has_zero_slope():
    result = necessity_check(4, 3, EPS, FINE)
    assert result.predicted == 0.0
    assert abs(result.slope) <= 1e-3
    assert result.verdict == "CONSISTENT"


@pytest.mark.parametrize("r, q, predicted", [(2, 3, -0.25), (math.inf, 4.5, -0.125)])
def test_necessity_slopes_match_expansion(r, q, predicted):
    result = necessity_check(r, q, EPS, FINE)
    assert result.predicted == pytest.approx(predicted)
    assert result.slope == pytest.approx(predicted, rel=0.05)
    assert result.verdict == "CONSISTENT"


def test_necessity_identity_case_has_zero_margin():
    # r = q = 2 leaves f analytic, so both sides are the same H^2 norm
    result = necessity_check(2, 2, EPS, FINE)
    assert result.predicted == 0.0
    assert max(abs(m) for m in result.margins) <= 1e-10
    assert result.verdict == "CONSISTENT"


def test_necessity_input_validation():
    with pytest.raises(DomainError):
        necessity_check(1.0, 2, EPS, FINE)
    with pytest.raises(DomainError):
        necessity_check(4, 3, [0.05], FINE)
    with pytest.raises(DomainError):
        necessity_check(4, 3, [0.1, 0.05], FINE)
    with pytest.raises(DomainError):
        necessity_check(4, 3, [0.1, 0.3], FINE)


# ============================================================================
# Extremal search
# ============================================================================

def test_extremal_search_rejects_unsupported_kind():
    with pytest.raises(DomainError):
        extremal_search(InequalityKind.logconvex(2.0, 2.0), 2, 1, CFG)
    with pytest.raises(DomainError):
        extremal_search(InequalityKind.burbea(1.0), -1, 1, CFG)


@pytest.mark.slow
def test_extremal_search_burbea_finds_no_violation():
    result = extremal_search(InequalityKind.burbea(1.0), 2, 2, LOOSE, starts=[ONE_PLUS_Z], max_iterations=150)
    assert not result.violation
    assert result.record.margin >= -1e-6
    # the start already has margin 4/pi - sqrt(1.5)
    assert result.record.margin <= 4 / math.pi - math.sqrt(1.5) + 1e-9
    assert result.evaluations > 0
    assert np.linalg.norm(result.record.coeffs) == pytest.approx(1.0)
