#!/usr/bin/env python3
"""
Tests for seeded random test functions
Run with: pytest tests/test_sampling.py
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add app to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import DomainError
from app.functions import riesz_project
from app.sampling import (SamplerKind, SamplerSpec, sample, sample_burbea, sample_trig,
                          sample_zero_free, trial_rng)

DRAWS = 20000


def empirical_second_moments(spec, draws=DRAWS):
    total = None
    for trial in range(draws):
        values = np.abs(sample(spec, trial).coeffs) ** 2
        total = values if total is None else total + values
    return total / draws


def test_burbea_sample_is_deterministic():
    spec = SamplerSpec.burbea(1.0, 6, master_seed=42)
    first = sample_burbea(spec, 7)
    second = sample_burbea(spec, 7)
    assert np.array_equal(first.coeffs, second.coeffs)
    assert not np.array_equal(first.coeffs, sample_burbea(spec, 8).coeffs)


def test_different_seeds_differ():
    a = sample_burbea(SamplerSpec.burbea(1.0, 6, master_seed=1), 0)
    b = sample_burbea(SamplerSpec.burbea(1.0, 6, master_seed=2), 0)
    assert not np.array_equal(a.coeffs, b.coeffs)


def test_substreams_are_independent_of_main_stream():
    spec = SamplerSpec.burbea(2.0, 4, master_seed=3)
    main = sample_burbea(spec, 5)
    sub = sample_burbea(spec, 5, 0)
    assert not np.array_equal(main.coeffs, sub.coeffs)
    assert np.array_equal(sub.coeffs, sample_burbea(spec, 5, 0).coeffs)


def test_trial_streams_share_no_prefix():
    first = trial_rng(9, 0).standard_normal(8)
    second = trial_rng(9, 1).standard_normal(8)
    assert not np.any(np.isclose(first, second))


def test_burbea_variance_p2_is_one():
    moments = empirical_second_moments(SamplerSpec.burbea(2.0, 3, master_seed=11))
    assert np.allclose(moments, 1.0, rtol=0.05)


def test_burbea_variance_p1_is_n_plus_one():
    moments = empirical_second_moments(SamplerSpec.burbea(1.0, 3, master_seed=12))
    assert np.allclose(moments, [1, 2, 3, 4], rtol=0.05)


def test_trig_sample_variance_and_shape():
    spec = SamplerSpec.standard_trig(2, 3, master_seed=13)
    f = sample_trig(spec, 0)
    assert f.min_degree == -2
    assert f.coeffs.size == 6
    moments = empirical_second_moments(spec)
    assert np.all((moments > 0.96) & (moments < 1.04))


def test_trig_sample_with_no_negative_modes_is_analytic():
    spec = SamplerSpec.standard_trig(0, 5, master_seed=14)
    f = sample_trig(spec, 3)
    assert np.array_equal(riesz_project(f).coeffs, f.coeffs)


def test_real_coefficient_flag():
    spec = SamplerSpec.burbea(1.0, 5, master_seed=15, real_coefficients=True)
    assert np.all(sample_burbea(spec, 0).coeffs.imag == 0)
    moments = empirical_second_moments(spec, 10000)
    assert np.allclose(moments, np.arange(1, 7), rtol=0.08)


def test_sampler_kind_mismatch():
    with pytest.raises(DomainError):
        sample_trig(SamplerSpec.burbea(1.0, 3), 0)
    with pytest.raises(DomainError):
        sample_burbea(SamplerSpec.standard_trig(1, 1), 0)


def test_spec_validation():
    with pytest.raises(DomainError):
        SamplerSpec.burbea(2.5, 3)
    with pytest.raises(DomainError):
        SamplerSpec.burbea(0.0, 3)
    with pytest.raises(DomainError):
        SamplerSpec.burbea(1.0, -1)
    with pytest.raises(DomainError):
        SamplerSpec.standard_trig(-1, 2)
    with pytest.raises(DomainError):
        SamplerSpec.burbea(1.0, 3, master_seed=-5)
    with pytest.raises(DomainError):
        trial_rng(0, -1)


def test_spec_to_dict():
    assert SamplerSpec.burbea(1.0, 4).to_dict() == {
        'sampler': 'burbea', 'p': 1.0, 'degree': 4, 'real_coefficients': False,
    }
    assert SamplerSpec.standard_trig(2, 3).to_dict()['sampler'] == SamplerKind.STANDARD_TRIG.value


def test_zero_free_sampling():
    spec = SamplerSpec.burbea(2.0, 3, master_seed=16)
    f, attempts = sample_zero_free(spec, 0)
    assert f is not None
    assert attempts >= 1
    assert f.is_zero_free_closed_disc()
    again, again_attempts = sample_zero_free(spec, 0)
    assert np.array_equal(f.coeffs, again.coeffs)
    assert again_attempts == attempts


def test_zero_free_sampling_respects_cap():
    # degree-40 samples with unit variances essentially always have zeros inside the disc
    spec = SamplerSpec.burbea(2.0, 40, master_seed=17)
    f, attempts = sample_zero_free(spec, 0, max_rejections=3)
    assert f is None
    assert attempts == 4
