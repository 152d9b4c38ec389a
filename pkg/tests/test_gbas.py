import math

import numpy as np
import pytest

from subtv import FULL_CUBE, ProductSampler, gbas_estimate, make_condition, rng_stream, sample_exp1
from subtv.errors import BudgetExhausted, InvalidParameter


class _FixedUniform:
    """Stub generator returning a scripted uniform value."""

    def __init__(self, value):
        self.value = value

    def random(self, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value)


def test_sample_exp1_inverse_cdf_identity():
    assert sample_exp1(_FixedUniform(0.5)) == pytest.approx(math.log(2))
    assert sample_exp1(_FixedUniform(0.0)) == 0.0


def test_sample_exp1_moments_and_support():
    rng = rng_stream(100)
    draws = np.array([sample_exp1(rng) for _ in range(100_000)])
    assert (draws >= 0).all()
    assert 0.98 <= draws.mean() <= 1.02


def test_parameter_validation():
    sampler = ProductSampler([0.5])
    rng = rng_stream(0)
    with pytest.raises(InvalidParameter):
        gbas_estimate(sampler, FULL_CUBE, 0, 1, 1, rng)
    with pytest.raises(InvalidParameter):
        gbas_estimate(sampler, make_condition([(0, 1)], 1), 0, 1, 10, rng)
    with pytest.raises(InvalidParameter):
        gbas_estimate(sampler, FULL_CUBE, 0, 2, 10, rng)


def test_deterministic_coordinate_draw_count_and_concentration():
    # p = 1 means every draw succeeds: exactly k draws, r ~ Gamma(k, 1)
    sampler = ProductSampler([1.0])
    k = 300
    hits = 0
    for trial in range(200):
        res = gbas_estimate(sampler, FULL_CUBE, 0, 1, k, rng_stream(1000 + trial))
        assert res.draws == k
        assert res.s == k
        assert res.p_hat == (k - 1) / res.r
        if abs(res.p_hat - 1.0) <= 0.2:
            hits += 1
    assert hits >= 190


def test_fair_coordinate_relative_error_and_mean_draws():
    # k from the guarantee at eps = 0.1, delta = 0.05
    k = math.ceil(3 * math.log(40) / 0.01)
    assert k == 1107
    sampler = ProductSampler([0.5])
    failures = 0
    draw_counts = []
    for trial in range(200):
        res = gbas_estimate(sampler, FULL_CUBE, 0, 1, k, rng_stream(2000 + trial))
        draw_counts.append(res.draws)
        if abs(res.p_hat / 0.5 - 1.0) > 0.1:
            failures += 1
    assert failures <= 10
    mean_draws = float(np.mean(draw_counts))
    assert abs(mean_draws - k / 0.5) <= 0.1 * (k / 0.5)


@pytest.mark.parametrize("p", [0.25, 0.5, 0.75])
def test_unbiasedness_probe(p):
    sampler = ProductSampler([p])
    k = 500
    estimates = np.array(
        [
            gbas_estimate(sampler, FULL_CUBE, 0, 1, k, rng_stream(3000 + t)).p_hat
            for t in range(1000)
        ]
    )
    assert (estimates > 0).all()
    se = estimates.std(ddof=1) / math.sqrt(len(estimates))
    assert abs(estimates.mean() - p) <= 3 * se


def test_result_invariants_on_skewed_coordinate():
    sampler = ProductSampler([0.05])
    res = gbas_estimate(sampler, FULL_CUBE, 0, 1, 50, rng_stream(4))
    assert res.draws >= res.s == 50
    assert res.p_hat == (50 - 1) / res.r
    assert res.p_hat > 0
    assert res.r > 0


def test_budget_exhausted_on_zero_probability():
    # head = 0 never appears when the coordinate is deterministically 1
    sampler = ProductSampler([1.0])
    with pytest.raises(BudgetExhausted):
        gbas_estimate(sampler, FULL_CUBE, 0, 0, 10, rng_stream(0), max_draws=5000)
