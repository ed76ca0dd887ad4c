"""Seeded Monte Carlo estimation of stability probabilities, exact binomial
confidence intervals, and the sample-complexity bound for detecting
epsilon-non-robust designs.

Reproducibility contract: partition k of a run seeded with `seed` draws from
the stream SeedSequence(entropy=seed, spawn_key=(k,)), a pure function of
(seed, k), so estimates are bit-identical for fixed (seed, n, partitions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import beta as _beta_dist

from .firstorder import FirstOrderCase

__all__ = [
    "ProbabilityEstimate",
    "SamplePlan",
    "sample_gaussian_pair",
    "estimate_probability",
    "uniform_box_fraction",
    "required_samples",
    "clopper_pearson",
]

Event = Callable[[float, float], bool]


@dataclass(frozen=True)
class ProbabilityEstimate:
    """Point estimate with an exact (Clopper-Pearson) two-sided confidence
    interval and full replay information."""

    p_hat: float
    ci_low: float
    ci_high: float
    n: int
    confidence: float
    seed: int
    partitions: int


@dataclass(frozen=True)
class SamplePlan:
    """Least N with N > ln(1/delta)/ln(1/(1-epsilon)): running N independent
    trials detects any design whose violation fraction is at least epsilon
    with probability greater than 1 - delta."""

    epsilon: float
    delta: float
    n_required: int


def _partition_stream(seed: int, partition: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(partition,)))


def _chunk_sizes(n: int, partitions: int) -> list[int]:
    base, extra = divmod(n, partitions)
    return [base + (1 if k < extra else 0) for k in range(partitions)]


def sample_gaussian_pair(case: FirstOrderCase, stream: np.random.Generator) -> tuple[float, float]:
    """One draw (p, q) with p ~ N(p0, sigma_p), q ~ N(q0, sigma_q),
    independent.  Consumes exactly two standard normals, in that order, so
    batched draws of shape (m, 2) reproduce repeated scalar calls."""
    z = stream.standard_normal(2)
    return case.p0 + case.sigma_p * float(z[0]), case.q0 + case.sigma_q * float(z[1])


def clopper_pearson(successes: int, n: int, confidence: float) -> tuple[float, float]:
    """Exact two-sided binomial confidence interval by beta tail inversion."""
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    if not 0 <= successes <= n:
        raise ValueError("successes must be between 0 and n")
    alpha = 1.0 - confidence
    lo = 0.0 if successes == 0 else float(_beta_dist.ppf(alpha / 2.0, successes, n - successes + 1))
    hi = 1.0 if successes == n else float(_beta_dist.ppf(1.0 - alpha / 2.0, successes + 1, n - successes))
    return lo, hi


def _estimate(
    event: Event,
    draw: Callable[[np.random.Generator, int], tuple[np.ndarray, np.ndarray]],
    n: int,
    confidence: float,
    seed: int,
    partitions: int,
) -> ProbabilityEstimate:
    if n < 1:
        raise ValueError("n must be >= 1")
    if partitions < 1 or partitions > n:
        raise ValueError("partitions must be between 1 and n")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    count = 0
    for k, m in enumerate(_chunk_sizes(n, partitions)):
        if m == 0:
            continue
        ps, qs = draw(_partition_stream(seed, k), m)
        count += sum(1 for p, q in zip(ps.tolist(), qs.tolist()) if event(p, q))
    p_hat = count / n
    lo, hi = clopper_pearson(count, n, confidence)
    return ProbabilityEstimate(p_hat, lo, hi, n, confidence, seed, partitions)


def estimate_probability(
    event: Event,
    case: FirstOrderCase,
    n: int,
    confidence: float = 0.99,
    seed: int = 0,
    partitions: int = 1,
) -> ProbabilityEstimate:
    """Fraction of n Gaussian parameter draws (p, q) satisfying event, with
    an exact binomial confidence interval."""

    def draw(stream: np.random.Generator, m: int):
        z = stream.standard_normal((m, 2))
        return case.p0 + case.sigma_p * z[:, 0], case.q0 + case.sigma_q * z[:, 1]

    return _estimate(event, draw, n, confidence, seed, partitions)


def uniform_box_fraction(
    event: Event,
    case: FirstOrderCase,
    n: int,
    seed: int = 0,
    confidence: float = 0.99,
    partitions: int = 1,
) -> ProbabilityEstimate:
    """Unbiased estimate of the volume fraction of the box B(r) on which
    event holds, from n uniform draws over the box."""

    def draw(stream: np.random.Generator, m: int):
        z = stream.uniform(-case.r, case.r, size=(m, 2))
        return case.p0 + z[:, 0], case.q0 + z[:, 1]

    return _estimate(event, draw, n, confidence, seed, partitions)


def required_samples(epsilon: float, delta: float) -> SamplePlan:
    """Minimal integer N strictly exceeding ln(1/delta)/ln(1/(1-epsilon));
    ties round up."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"requires 0 < epsilon < 1, got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"requires 0 < delta < 1, got {delta}")
    bound = math.log(1.0 / delta) / math.log(1.0 / (1.0 - epsilon))
    return SamplePlan(epsilon, delta, math.floor(bound) + 1)
