import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momlab.distributions import Gaussian, sample
from momlab.errors import ParameterError
from momlab.estimators import (
    catoni,
    median_of_means,
    sample_mean,
    sample_median,
    trimmed_mean,
)

finite_lists = st.lists(
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=2, max_size=80
)


def test_mom_sequential_blocks():
    assert median_of_means(np.arange(9.0), 3) == 4.0


def test_mom_k1_is_sample_mean():
    assert median_of_means([1.0, 2.0, 3.0, 4.0], 1) == 2.5


def test_mom_even_k_lower_middle_convention():
    assert median_of_means([1.0, 2.0, 3.0, 4.0], 2) == 1.5


def test_mom_k_equals_n_is_order_statistic():
    x = np.array([9.0, 1.0, 5.0, 3.0, 7.0])
    assert median_of_means(x, 5) == 5.0  # ceil(5/2) = 3rd smallest


def test_mom_drops_leftover_samples():
    # n=7, k=2 -> m=3; the 7th value is ignored
    x = np.array([0.0, 0.0, 0.0, 9.0, 9.0, 9.0, 1e6])
    assert median_of_means(x, 2) == 0.0


def test_mom_shuffled_deterministic():
    x = sample(Gaussian(), 100, 5)
    a = median_of_means(x, 7, "shuffled", 99)
    b = median_of_means(x, 7, "shuffled", 99)
    assert a == b
    assert median_of_means(x, 7, "shuffled", 100) != a


@given(finite_lists, st.integers(min_value=1, max_value=80))
@settings(max_examples=60, deadline=None)
def test_mom_equivariance(values, k):
    x = np.array(values)
    if k > x.size:
        k = x.size
    base = median_of_means(x, k, "shuffled", 3)
    shifted = median_of_means(x + 10.5, k, "shuffled", 3)
    scaled = median_of_means(2.5 * x, k, "shuffled", 3)
    assert shifted == pytest.approx(base + 10.5, rel=1e-9, abs=1e-7)
    assert scaled == pytest.approx(2.5 * base, rel=1e-9, abs=1e-9)


@given(finite_lists)
@settings(max_examples=40, deadline=None)
def test_mom_reductions(values):
    x = np.array(values)
    assert median_of_means(x, 1) == pytest.approx(np.mean(x), rel=1e-12, abs=1e-9)
    assert median_of_means(x, x.size) == np.sort(x)[(x.size + 1) // 2 - 1]


@given(
    st.integers(min_value=2, max_value=12),
    st.integers(min_value=2, max_value=8),
    st.integers(min_value=0, max_value=2**32),
)
@settings(max_examples=40, deadline=None)
def test_mom_breakdown_containment(k, m, seed):
    x = sample(Gaussian(), k * m, seed)
    clean_means = x.reshape(k, m).mean(axis=1)
    corrupted = x.copy()
    budget = (k + 1) // 2 - 1  # fewer than half the blocks can move
    corrupted[np.arange(budget) * m] = 1e15
    value = median_of_means(corrupted, k)
    assert clean_means.min() <= value <= clean_means.max()


def test_mom_permutation_within_block_invariant():
    x = sample(Gaussian(), 60, 8)
    k, m = 5, 12
    permuted = x.copy()
    permuted[m : 2 * m] = permuted[m : 2 * m][::-1]  # reorder inside block 2 only
    assert median_of_means(permuted, k) == pytest.approx(median_of_means(x, k), rel=1e-12)


def test_trimmed_mean_examples():
    assert trimmed_mean([1.0, 2.0, 3.0, 4.0, 100.0], 0.2) == 3.0
    x = [4.0, 1.0, 7.0]
    assert trimmed_mean(x, 0.0) == pytest.approx(np.mean(x))
    assert trimmed_mean([5.0, 5.0, 5.0, 5.0], 0.25) == 5.0


@given(finite_lists, st.floats(min_value=0.0, max_value=0.45))
@settings(max_examples=60, deadline=None)
def test_trimmed_mean_within_trimmed_range(values, eps):
    x = np.sort(np.array(values))
    t = int(math.floor(eps * x.size + 1e-9))
    if 2 * t >= x.size:
        return
    value = trimmed_mean(values, eps)
    assert x[t] - 1e-9 <= value <= x[x.size - t - 1] + 1e-9


def test_catoni_constant_sample():
    assert catoni(np.full(50, 3.25), 1.0, 0.05) == 3.25


def test_catoni_symmetric_sample_is_zero():
    assert catoni(np.array([-2.0, -1.0, 1.0, 2.0]), 1.0, 0.2) == pytest.approx(0.0, abs=1e-9)


def test_catoni_gaussian_accuracy():
    x = sample(Gaussian(), 10**5, 7)
    assert abs(catoni(x, 1.0, 0.05)) <= 0.02


def test_catoni_shift_equivariance():
    x = sample(Gaussian(), 2000, 21)
    base = catoni(x, 1.0, 0.05)
    assert catoni(x + 5.0, 1.0, 0.05) == pytest.approx(base + 5.0, abs=1e-8)


def test_sample_median_convention():
    assert sample_median([4.0, 1.0, 3.0, 2.0]) == 2.0  # ceil(4/2) = 2nd smallest
    assert sample_mean([1.0, 2.0, 3.0]) == 2.0


def test_parameter_errors():
    with pytest.raises(ParameterError):
        median_of_means([1.0, 2.0], 3)
    with pytest.raises(ParameterError):
        median_of_means([1.0, 2.0], 0)
    with pytest.raises(ParameterError):
        median_of_means([1.0, 2.0], 1, "sorted")
    with pytest.raises(ParameterError):
        trimmed_mean([1.0, 2.0], 0.5)
    with pytest.raises(ParameterError):
        catoni(np.ones(3), 1.0, 0.05)  # n <= 2 log(1/delta)
    with pytest.raises(ParameterError):
        catoni(np.ones(100), 0.0, 0.05)
    with pytest.raises(ParameterError):
        catoni(np.ones(100), 1.0, 1.5)
