"""Mean estimators: median-of-means, trimmed mean, and an M-estimator baseline.

The median-of-means uses k equal blocks of size m = floor(n/k) and returns
the ceil(k/2)-th order statistic of the block means; leftover samples beyond
k*m are dropped so every block has the same size.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ParameterError
from .rng import generator
from .theory import BlockRule


def _kth(values: np.ndarray, r: int) -> float:
    """r-th smallest (1-based) via selection."""
    return float(np.partition(values, r - 1)[r - 1])


def _block_median(x: np.ndarray, k: int) -> float:
    """Median-of-means over a sample already in partition order."""
    m = x.size // k
    means = x[: k * m].reshape(k, m).mean(axis=1)
    return _kth(means, (k + 1) // 2)


def median_of_means(sample, k: int, partition: str = "sequential", seed: int = 0) -> float:
    """Median of the k block means of ``sample``.

    partition="shuffled" applies a seeded uniform permutation before blocking;
    "sequential" blocks the input in the given order (useful for exact tests).
    """
    x = np.ascontiguousarray(sample, dtype=float)
    n = x.size
    if not 1 <= k <= n:
        raise ParameterError(f"k must be in [1, n]={n}, got {k}")
    if partition not in ("sequential", "shuffled"):
        raise ParameterError(f"unknown partition {partition!r}")
    if partition == "shuffled":
        x = x[generator(seed).permutation(n)]
    return _block_median(x, k)


def trimmed_mean(sample, epsilon: float) -> float:
    """Mean after dropping the floor(eps*n) smallest and largest values."""
    x = np.asarray(sample, dtype=float)
    n = x.size
    if not 0.0 <= epsilon < 0.5:
        raise ParameterError(f"epsilon must be in [0, 0.5), got {epsilon}")
    t = int(math.floor(epsilon * n + 1e-9))
    if 2 * t >= n:
        raise ParameterError(f"trimming {t} per side empties a sample of size {n}")
    if t == 0:
        return float(np.mean(x))
    x = np.partition(x, [t, n - t - 1])
    return float(np.mean(x[t : n - t]))


def _influence_sum(z: np.ndarray) -> float:
    # odd, monotone influence: log(1 + x + x^2/2) for x >= 0, mirrored for x < 0
    return float(np.sum(np.sign(z) * np.log1p(np.abs(z) + 0.5 * z * z)))


def catoni(sample, scale_guess: float, delta: float) -> float:
    """Root of the summed influence function, located by bisection.

    The influence scale is sqrt(2L / (n s^2 (1 + 2L/(n-2L)))) with
    L = log(1/delta) and s the caller's scale guess; the root is bracketed by
    [min(sample), max(sample)] and resolved to 1e-10 * scale_guess.
    """
    x = np.asarray(sample, dtype=float)
    n = x.size
    if not (scale_guess > 0 and math.isfinite(scale_guess)):
        raise ParameterError(f"scale_guess must be positive and finite, got {scale_guess}")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must be in (0,1), got {delta}")
    big_l = math.log(1.0 / delta)
    if not n > 2 * big_l:
        raise ParameterError(f"needs n > 2*log(1/delta) = {2 * big_l:.3f}, got n={n}")
    theta_s = math.sqrt(2.0 * big_l / (n * scale_guess**2 * (1.0 + 2.0 * big_l / (n - 2.0 * big_l))))
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        return lo
    f_lo = _influence_sum(theta_s * (x - lo))
    f_hi = _influence_sum(theta_s * (x - hi))
    if f_lo < 0.0 or f_hi > 0.0:
        raise NumericError("influence sum does not change sign on [min(sample), max(sample)]")
    tol = 1e-10 * scale_guess
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _influence_sum(theta_s * (x - mid)) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sample_mean(sample) -> float:
    return float(np.mean(np.asarray(sample, dtype=float)))


def sample_median(sample) -> float:
    """ceil(n/2)-th order statistic, matching the median-of-means convention."""
    x = np.asarray(sample, dtype=float)
    if x.size == 0:
        raise ParameterError("empty sample")
    return _kth(x, (x.size + 1) // 2)


@dataclass(frozen=True)
class MedianOfMeans:
    rule: BlockRule
    partition: str = "shuffled"

    def label(self) -> str:
        return f"mom(rule={self.rule.label()}, partition={self.partition})"


@dataclass(frozen=True)
class TrimmedMean:
    epsilon: "float | None" = None  # None: alpha + sqrt(log(4/delta)/(2n)) at run time

    def label(self) -> str:
        return "trimmed(eps=auto)" if self.epsilon is None else f"trimmed(eps={self.epsilon:g})"


@dataclass(frozen=True)
class CatoniEstimator:
    scale_guess: "float | None" = None  # None: the distribution's exact scale
    delta: "float | None" = None  # None: the plan's delta

    def label(self) -> str:
        s = "auto" if self.scale_guess is None else f"{self.scale_guess:g}"
        d = "auto" if self.delta is None else f"{self.delta:g}"
        return f"catoni(scale={s}, delta={d})"


@dataclass(frozen=True)
class SampleMean:
    def label(self) -> str:
        return "sample_mean"


@dataclass(frozen=True)
class SampleMedian:
    def label(self) -> str:
        return "sample_median"


EstimatorSpec = MedianOfMeans | TrimmedMean | CatoniEstimator | SampleMean | SampleMedian
