import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momlab.distributions import ClassTag, Gaussian, block_mean_quantile_analytic
from momlab.errors import HypothesisError, ParameterError
from momlab.theory import (
    FractionBlocks,
    HeavyTailBlocks,
    PowerLawBlocks,
    asymptotic_bias_order,
    bound_finite_variance,
    bound_general_quantile,
    bound_infinite_variance,
    finite_variance_constant,
    resolve_blocks,
)


def test_heavy_tail_blocks_examples():
    rule = HeavyTailBlocks(3.0)
    assert resolve_blocks(rule, 10**6, 0.01, 0.05).k == 30000
    assert resolve_blocks(rule, 10**6, 0.0, 0.05).k == 133


def test_fraction_blocks_example():
    assert resolve_blocks(FractionBlocks(0.2), 10**7, 0.01, 0.05).k == 2 * 10**6


def test_power_law_blocks():
    k = resolve_blocks(PowerLawBlocks(4.0, 2.0 / 3.0), 10**6, 0.01, 0.05).k
    assert k == math.ceil(4.0 * 0.01 ** (2.0 / 3.0) * 10**6)


def test_clamping_is_reported():
    low = resolve_blocks(PowerLawBlocks(4.0, 2.0 / 3.0), 10**6, 0.0, 0.05)
    assert low.k == 1 and low.clamped
    high = resolve_blocks(HeavyTailBlocks(3.0), 100, 0.4, 0.5)
    assert high.k == 100 and high.clamped  # ceil(3 * 0.4 * 100) = 120 > n
    exact = resolve_blocks(HeavyTailBlocks(3.0), 10**6, 0.01, 0.05)
    assert not exact.clamped


def test_heavy_tail_hypothesis_errors():
    with pytest.raises(HypothesisError, match="alpha <= 0.4"):
        resolve_blocks(HeavyTailBlocks(3.0), 1000, 0.45, 0.05)
    with pytest.raises(HypothesisError, match="delta"):
        resolve_blocks(HeavyTailBlocks(2.1), 50, 0.0, 1e-9)
    with pytest.raises(ParameterError):
        HeavyTailBlocks(2.0)
    with pytest.raises(ParameterError):
        resolve_blocks(HeavyTailBlocks(3.0), 1000, -0.1, 0.05)
    with pytest.raises(ParameterError):
        resolve_blocks(HeavyTailBlocks(3.0), 1000, 0.1, 1.5)


@given(
    st.integers(min_value=10, max_value=10**7),
    st.floats(min_value=0.0, max_value=0.4),
    st.floats(min_value=0.01, max_value=0.99),
    st.floats(min_value=2.001, max_value=3.5),
)
@settings(max_examples=200, deadline=None)
def test_heavy_tail_block_count_dominates_contamination(n, alpha, delta, gamma):
    c = (0.5 - 1.0 / gamma) ** 2
    if not delta > 2.0 * math.exp(-c * n):
        return
    k = resolve_blocks(HeavyTailBlocks(gamma), n, alpha, delta).k
    assert 1 <= k <= n
    if gamma * alpha <= 1.0:  # no clamping possible
        assert k > 2 * alpha * n


def test_finite_variance_constant_value():
    assert finite_variance_constant(2.5) == pytest.approx(135.34, abs=0.02)


def test_bound_finite_variance_example():
    bv = bound_finite_variance(10**6, 0.01, 0.05, 2.5, 1.0)
    assert bv.value == pytest.approx(13.794, abs=0.01)
    assert bv.regime == "bias_term_dominant"
    assert bound_finite_variance(10**6, 0.0, 0.05, 2.5, 1.0).regime == "iid_term_dominant"


def test_bound_finite_variance_limit_in_n():
    # the iid term vanishes: value approaches C * sigma * sqrt(alpha)
    big = bound_finite_variance(10**12, 0.01, 0.05, 2.5, 1.0)
    assert big.value == pytest.approx(finite_variance_constant(2.5) * 0.1, rel=1e-2)


def test_bound_finite_variance_monotonicity():
    base = bound_finite_variance(10**5, 0.01, 0.05, 2.5, 1.0).value
    assert bound_finite_variance(10**6, 0.01, 0.05, 2.5, 1.0).value <= base
    assert bound_finite_variance(10**5, 0.02, 0.05, 2.5, 1.0).value >= base
    assert bound_finite_variance(10**5, 0.01, 0.10, 2.5, 1.0).value <= base


def test_bound_finite_variance_hypotheses():
    with pytest.raises(HypothesisError, match="gamma"):
        bound_finite_variance(10**6, 0.01, 0.05, 3.0, 1.0)
    with pytest.raises(HypothesisError, match="alpha"):
        bound_finite_variance(10**6, 0.41, 0.05, 2.5, 1.0)
    with pytest.raises(HypothesisError, match="delta"):
        bound_finite_variance(20, 0.01, 1e-9, 2.1, 1.0)
    with pytest.raises(ParameterError):
        bound_finite_variance(10**6, 0.01, 0.05, 2.5, math.inf)


def test_bound_infinite_variance_default_constant():
    bv = bound_infinite_variance(10**6, 0.01, 0.05, 2.5, 1.0, 0.5)
    assert bv.constant_used == pytest.approx(0.1 ** (-4.0 / 3.0), rel=1e-12)
    override = bound_infinite_variance(10**6, 0.01, 0.05, 2.5, 1.0, 0.5, constant_override=2.0)
    assert override.constant_used == 2.0


def test_bound_infinite_variance_alpha_zero_reduces_to_iid_term():
    bv = bound_infinite_variance(10**6, 0.0, 0.05, 2.5, 2.0, 0.5)
    e = 0.5 / 1.5
    expected = bv.constant_used * 2.0 ** (1 / 1.5) * (math.log(40.0) / 10**6) ** e
    assert bv.value == pytest.approx(expected, rel=1e-12)


def test_bound_infinite_variance_bias_exponent():
    # at huge n the bias term dominates and scales as alpha^(r/(1+r))
    r = 1.0 / 3.0
    lo = bound_infinite_variance(10**30, 1e-4, 0.05, 2.5, 1.0, r).value
    hi = bound_infinite_variance(10**30, 1e-2, 0.05, 2.5, 1.0, r).value
    assert hi / lo == pytest.approx(10.0**0.5, rel=1e-6)  # (1e-2/1e-4)^(1/4)


def test_bound_general_quantile_arguments():
    seen = []

    def accessor(q):
        seen.append(q)
        return q - 0.5  # symmetric toy quantile

    value = bound_general_quantile(accessor, k=4, m=2, alpha=1.0 / 16.0, delta=0.8)
    s = math.sqrt(math.log(2.0 / 0.8) / 8.0)
    assert seen[0] == pytest.approx(0.5 + s + 0.125)
    assert seen[0] == pytest.approx(0.963, abs=5e-4)
    assert value == pytest.approx(s + 0.125)


def test_bound_general_quantile_gaussian_alpha_zero():
    dist = Gaussian(0.0, 1.0)
    m, k, delta = 75, 133, 0.05
    value = bound_general_quantile(
        lambda q: block_mean_quantile_analytic(dist, m, q), k, m, 0.0, delta
    )
    s = math.sqrt(math.log(2.0 / delta) / (2.0 * k))
    assert value == pytest.approx(block_mean_quantile_analytic(dist, m, 0.5 + s))


def test_bound_general_quantile_large_k_delta_near_one():
    dist = Gaussian(0.0, 1.0)
    value = bound_general_quantile(
        lambda q: block_mean_quantile_analytic(dist, 4, q), 10**6, 4, 0.0, 0.999
    )
    assert 0.0 <= value <= 1e-3


def test_bound_general_quantile_hypothesis():
    with pytest.raises(HypothesisError, match="1/2"):
        bound_general_quantile(lambda q: 0.0, k=4, m=100, alpha=0.01, delta=0.05)


def test_asymptotic_bias_orders():
    assert asymptotic_bias_order(ClassTag.FINITE_VARIANCE) == 0.5
    assert asymptotic_bias_order(ClassTag.SUB_EXPONENTIAL) == pytest.approx(2.0 / 3.0)
    assert asymptotic_bias_order(ClassTag.FINITE_1PLUS_R_MOMENT, r=1.0 / 3.0) == pytest.approx(0.25)
    assert asymptotic_bias_order(ClassTag.SUB_GAUSSIAN, s=3) == pytest.approx(0.75)
    assert asymptotic_bias_order(ClassTag.SYMMETRIC) == 1.0


def test_asymptotic_bias_order_hierarchy():
    # smaller exponent = larger floor at small alpha
    a = 1e-3
    exps = [
        asymptotic_bias_order(ClassTag.SYMMETRIC),
        asymptotic_bias_order(ClassTag.SUB_EXPONENTIAL),
        asymptotic_bias_order(ClassTag.FINITE_VARIANCE),
    ]
    values = [a**e for e in exps]
    assert values == sorted(values)


def test_asymptotic_bias_order_errors():
    with pytest.raises(ParameterError):
        asymptotic_bias_order(ClassTag.FINITE_1PLUS_R_MOMENT)
    with pytest.raises(ParameterError):
        asymptotic_bias_order(ClassTag.SUB_GAUSSIAN, s=2)
    with pytest.raises(ParameterError):
        asymptotic_bias_order(ClassTag.FINITE_THIRD_MOMENT)


def test_rule_parameter_validation():
    with pytest.raises(ParameterError):
        PowerLawBlocks(0.0, 0.5)
    with pytest.raises(ParameterError):
        PowerLawBlocks(4.0, 1.5)
    with pytest.raises(ParameterError):
        FractionBlocks(0.0)
    with pytest.raises(ParameterError):
        FractionBlocks(1.5)
