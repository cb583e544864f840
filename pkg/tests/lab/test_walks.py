from __future__ import annotations

import math

import numpy as np
import pytest

from lilrates.analytic import abs_normal_tail, sup_wiener_tail
from lilrates.errors import DomainError
from lilrates.lab.distributions import Normal, Rademacher, TwoSidedPareto, UniformSym
from lilrates.lab.walks import (
    TailEstimate,
    estimate_tail,
    fit_empirical_tail,
    sample_walk,
    walk_statistics,
)
from lilrates.limits import Statistic


def within(estimate: TailEstimate, expected: float, bias: float = 0.0) -> bool:
    return abs(estimate.p_hat - expected) <= 4 * estimate.std_err + bias


@pytest.mark.parametrize(
    "n, threshold, statistic, expected",
    [
        (2, 2.0, Statistic.max, 0.5),
        (3, 3.0, Statistic.abs, 0.25),
        (3, 2.0, Statistic.max, 0.5),
        (1, 1.0, Statistic.abs, 1.0),
    ],
)
def test_rademacher_exact_tails(rademacher, n, threshold, statistic, expected):
    estimate = estimate_tail(rademacher, n, threshold, statistic, 10_000, seed=1)
    assert estimate.paths == 10_000
    assert within(estimate, expected)


def test_normal_abs_tail(normal):
    n = 200
    estimate = estimate_tail(
        normal, n, 1.5 * math.sqrt(n), Statistic.abs, 10_000, seed=3
    )
    assert within(estimate, abs_normal_tail(1.5))
    assert abs_normal_tail(1.5) == pytest.approx(0.1336, abs=1e-4)


def test_normal_max_tail_below_continuous_limit(normal):
    n = 200
    estimate = estimate_tail(
        normal, n, 1.5 * math.sqrt(n), Statistic.max, 10_000, seed=3
    )
    # the discrete maximum misses excursions between steps
    assert estimate.p_hat <= sup_wiener_tail(1.5) + 4 * estimate.std_err
    assert within(estimate, sup_wiener_tail(1.5), bias=0.03)


def test_max_never_below_abs(normal):
    args = (normal, 100, 12.0)
    abs_tail = estimate_tail(*args, Statistic.abs, 2000, seed=5)
    max_tail = estimate_tail(*args, Statistic.max, 2000, seed=5)
    assert max_tail.p_hat >= abs_tail.p_hat


def test_workers_do_not_change_results(normal):
    kwargs = {"n": 50, "threshold": 8.0, "statistic": Statistic.max, "paths": 3000}
    serial = estimate_tail(normal, seed=11, workers=1, **kwargs)
    threaded = estimate_tail(normal, seed=11, workers=3, **kwargs)
    assert serial == threaded


def test_path_values_do_not_depend_on_path_count():
    dist = UniformSym()
    small = walk_statistics(dist, [10, 100], 5, seed=2)
    large = walk_statistics(dist, [10, 100], 2000, seed=2)
    np.testing.assert_array_equal(small.absolute, large.absolute[:5])
    np.testing.assert_array_equal(small.maximum, large.maximum[:5])


def test_scale_equivariance():
    unit = sample_walk(Normal(1.0), 500, stream=4, seed=9)
    doubled = sample_walk(Normal(2.0), 500, stream=4, seed=9)
    assert doubled.s_n == 2 * unit.s_n
    assert doubled.m_n == 2 * unit.m_n


def test_sample_walk_matches_walk_statistics():
    dist = TwoSidedPareto(3.0)
    single = sample_walk(dist, 300, stream=2, seed=4)
    stats = walk_statistics(dist, [300], 3, seed=4)
    assert abs(single.s_n) == stats.absolute[2, 0]
    assert single.m_n == stats.maximum[2, 0]
    assert single.m_n >= abs(single.s_n)
    assert single.delta_n is None


def test_walk_statistics_checkpoints():
    stats = walk_statistics(Rademacher(), [1, 2, 5000], 10, seed=0)
    assert stats.paths == 10
    assert np.all(stats.absolute[:, 0] == 1.0)
    assert np.all(stats.maximum[:, 1] >= stats.absolute[:, 1])
    # the running maximum never decreases
    assert np.all(np.diff(stats.maximum, axis=1) >= 0)


def test_block_sums_skip_the_maximum():
    stats = walk_statistics(Normal(), [10, 1000], 50, seed=0, need_max=False)
    assert stats.maximum is None
    with pytest.raises(DomainError):
        stats.of(Statistic.max)


def test_progress_reports_every_chunk(normal):
    seen = []
    walk_statistics(normal, [10], 3000, seed=0, progress=seen.append)
    assert seen == [1, 2, 3]


def test_truncation_deviation():
    stats = walk_statistics(TwoSidedPareto(2.5), [100], 200, seed=0, truncate_at=1e9)
    assert np.all(stats.delta == 0.0)
    cut = walk_statistics(Rademacher(), [100], 20, seed=0, truncate_at=0.5)
    # every increment is cut away, the deviation is the running maximum
    np.testing.assert_array_equal(cut.delta, cut.maximum)


@pytest.mark.parametrize(
    "call",
    [
        lambda d: estimate_tail(d, 10, 1.0, Statistic.abs, 99, seed=0),
        lambda d: estimate_tail(d, 0, 1.0, Statistic.abs, 1000, seed=0),
        lambda d: walk_statistics(d, [], 10, seed=0),
        lambda d: walk_statistics(d, [5, 3], 10, seed=0),
        lambda d: walk_statistics(d, [5], 0, seed=0),
        lambda d: sample_walk(d, 0, stream=0, seed=0),
    ],
)
def test_walk_domain_errors(normal, call):
    with pytest.raises(DomainError):
        call(normal)


def test_fit_empirical_tail(normal):
    table = fit_empirical_tail(normal, 400, Statistic.abs, 4000, seed=6)
    assert table.n == 400
    assert table.paths == 4000
    assert table.tail(1.5) == pytest.approx(abs_normal_tail(1.5), abs=0.03)
    with pytest.raises(DomainError):
        fit_empirical_tail(TwoSidedPareto(2.0), 10, Statistic.abs, 100, seed=0)


def test_tail_estimate_from_hits():
    estimate = TailEstimate.from_hits(25, 100)
    assert estimate.p_hat == 0.25
    assert estimate.std_err == pytest.approx(math.sqrt(0.25 * 0.75 / 100))


def test_threshold_extremes(normal):
    zero = estimate_tail(normal, 50, 0.0, Statistic.max, 500, seed=0)
    assert zero.p_hat == 1.0
    far = estimate_tail(normal, 50, 1e6 * math.sqrt(50), Statistic.max, 500, seed=0)
    assert far.p_hat == 0.0


def test_tail_nonincreasing_in_threshold(rademacher):
    estimates = [
        estimate_tail(rademacher, 64, bar, Statistic.max, 1000, seed=3).p_hat
        for bar in (2.0, 6.0, 10.0, 20.0)
    ]
    assert estimates == sorted(estimates, reverse=True)


def test_event_level_scale_equivariance():
    n, epsilon = 400, 0.8
    estimates = []
    for sigma in (1.0, 3.0):
        dist = Normal(sigma)
        bar = epsilon * sigma * math.sqrt(2 * n * math.log(math.log(n)))
        estimates.append(estimate_tail(dist, n, bar, Statistic.max, 2000, seed=12))
    assert estimates[0].p_hat == estimates[1].p_hat


def test_discretized_brownian_supremum(normal):
    n = 2000
    estimate = estimate_tail(normal, n, math.sqrt(n), Statistic.max, 5000, seed=21)
    # steps miss part of the continuous excursions
    assert within(estimate, sup_wiener_tail(1.0), bias=0.03)


@pytest.mark.slow
def test_invariance_principle_at_full_scale(normal):
    n, paths = 10_000, 100_000
    bar = math.sqrt(n)
    maximum = estimate_tail(normal, n, bar, Statistic.max, paths, seed=0)
    assert abs(maximum.p_hat - sup_wiener_tail(1.0)) <= 3 * maximum.std_err + 0.01
    assert sup_wiener_tail(1.0) == pytest.approx(0.6292, abs=1e-4)

    absolute = estimate_tail(normal, n, bar, Statistic.abs, paths, seed=0)
    assert abs(absolute.p_hat - abs_normal_tail(1.0)) <= 3 * absolute.std_err
    assert abs_normal_tail(1.0) == pytest.approx(0.3173, abs=1e-4)
