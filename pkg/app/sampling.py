#!/usr/bin/env python3
"""
Seeded random test functions

Each trial draws from its own numpy Generator seeded by
SeedSequence(master_seed, spawn_key=(trial_index, ...)), so a trial's sample
depends only on (master_seed, trial_index) and never on which worker thread
ran it or in what order.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from app.errors import DomainError
from app.functions import AnalyticPolynomial, TrigPolynomial
from app.weights import binomial_weights

MAX_SEED = 2 ** 64 - 1


class SamplerKind(Enum):
    BURBEA = "burbea"
    STANDARD_TRIG = "standard_trig"


@dataclass(frozen=True)
class SamplerSpec:
    """
    How to draw one random function.

    burbea: a_n complex Gaussian with E|a_n|^2 = c_{2/p}(n), n = 0..degree.
    standard_trig: a_{-M}..a_N i.i.d. with E|a_n|^2 = 1.
    real_coefficients switches both to real Gaussians with the same variance.
    """

    kind: SamplerKind
    master_seed: int = 0
    p: float = 2.0
    degree: int = 0
    M: int = 0
    N: int = 0
    real_coefficients: bool = False

    def __post_init__(self):
        if int(self.master_seed) != self.master_seed or not 0 <= self.master_seed <= MAX_SEED:
            raise DomainError(f"master_seed must be an integer in [0, 2^64), got {self.master_seed}")
        if self.kind is SamplerKind.BURBEA:
            if not 0 < self.p <= 2:
                raise DomainError(f"burbea sampling needs p in (0, 2], got {self.p}")
            if int(self.degree) != self.degree or self.degree < 0:
                raise DomainError(f"degree must be a nonnegative integer, got {self.degree}")
        else:
            for name in ("M", "N"):
                value = getattr(self, name)
                if int(value) != value or value < 0:
                    raise DomainError(f"{name} must be a nonnegative integer, got {value}")

    @classmethod
    def burbea(cls, p: float, degree: int, master_seed: int = 0,
               real_coefficients: bool = False) -> "SamplerSpec":
        return cls(SamplerKind.BURBEA, master_seed=master_seed, p=p, degree=degree,
                   real_coefficients=real_coefficients)

    @classmethod
    def standard_trig(cls, M: int, N: int, master_seed: int = 0,
                      real_coefficients: bool = False) -> "SamplerSpec":
        return cls(SamplerKind.STANDARD_TRIG, master_seed=master_seed, M=M, N=N,
                   real_coefficients=real_coefficients)

    def to_dict(self) -> dict:
        if self.kind is SamplerKind.BURBEA:
            params = {'sampler': self.kind.value, 'p': self.p, 'degree': self.degree}
        else:
            params = {'sampler': self.kind.value, 'M': self.M, 'N': self.N}
        params['real_coefficients'] = self.real_coefficients
        return params


def trial_rng(master_seed: int, trial_index: int, *substream: int) -> np.random.Generator:
    """Independent generator for (master_seed, trial_index[, substream...])"""
    if trial_index < 0:
        raise DomainError(f"trial_index must be >= 0, got {trial_index}")
    sequence = np.random.SeedSequence(int(master_seed), spawn_key=(int(trial_index),) + tuple(substream))
    return np.random.default_rng(sequence)


def _gaussian(rng: np.random.Generator, variances: np.ndarray, real: bool) -> np.ndarray:
    if real:
        return np.sqrt(variances) * rng.standard_normal(variances.size)
    parts = rng.standard_normal((2, variances.size))
    return np.sqrt(variances / 2.0) * (parts[0] + 1j * parts[1])


def sample_burbea(spec: SamplerSpec, trial_index: int, *substream: int) -> AnalyticPolynomial:
    """
    Random polynomial of the given degree with E|a_n|^2 = c_{2/p}(n).

    Extra substream integers give further independent draws for the same
    trial (used for products of several samples and for rejection sampling).
    """
    if spec.kind is not SamplerKind.BURBEA:
        raise DomainError(f"sample_burbea needs a burbea spec, got {spec.kind.value}")
    rng = trial_rng(spec.master_seed, trial_index, *substream)
    variances = binomial_weights(2.0 / spec.p, spec.degree).as_array()
    return AnalyticPolynomial(_gaussian(rng, variances, spec.real_coefficients))


def sample_trig(spec: SamplerSpec, trial_index: int, *substream: int) -> TrigPolynomial:
    """Random trigonometric polynomial with i.i.d. unit-variance coefficients a_{-M}..a_N"""
    if spec.kind is not SamplerKind.STANDARD_TRIG:
        raise DomainError(f"sample_trig needs a standard_trig spec, got {spec.kind.value}")
    rng = trial_rng(spec.master_seed, trial_index, *substream)
    variances = np.ones(spec.M + spec.N + 1)
    return TrigPolynomial(-spec.M, _gaussian(rng, variances, spec.real_coefficients))


def sample(spec: SamplerSpec, trial_index: int, *substream: int):
    if spec.kind is SamplerKind.BURBEA:
        return sample_burbea(spec, trial_index, *substream)
    return sample_trig(spec, trial_index, *substream)


def sample_zero_free(spec: SamplerSpec, trial_index: int,
                     max_rejections: int = 1000) -> Tuple[Optional[AnalyticPolynomial], int]:
    """
    Draw burbea samples until one is zero-free on the closed disc.

    Attempt k uses substream (k,). Returns (polynomial, attempts); the
    polynomial is None when max_rejections draws were all rejected.
    """
    for attempt in range(max_rejections + 1):
        candidate = sample_burbea(spec, trial_index, attempt)
        if candidate.is_zero_free_closed_disc():
            return candidate, attempt + 1
    return None, max_rejections + 1
