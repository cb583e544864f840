from __future__ import annotations

import math

import numpy as np
import pytest

from lilrates.errors import DivergentParametersError, DomainError
from lilrates.limits import Regime, Statistic, WeightExponents
from lilrates.series import (
    BREAKDOWN_KEYS,
    DriftSchedule,
    EmpiricalTailTable,
    SeriesSpec,
    TailKind,
    TailModel,
    default_grid,
    epsilon_sweep,
    evaluate_series,
    normalized_value,
    normalizer,
    series_remainder,
    threshold,
    weight,
)


def test_weights(thm1_spec, thm2_spec):
    assert weight(1, thm1_spec) == 1.0
    assert weight(10, thm1_spec) == pytest.approx(0.1)
    assert weight(10, thm2_spec) == pytest.approx(1 / (10 * math.log(10)))
    spec = SeriesSpec(Regime.thm1, WeightExponents(a=1.0, b=1.0))
    n = 1e6
    expected = math.log(n) * math.log(math.log(n)) / n
    assert weight(n, spec) == pytest.approx(expected, rel=1e-13)
    values = weight(np.arange(1, 50), thm1_spec)
    assert values.shape == (49,)
    with pytest.raises(DomainError):
        weight(0, thm1_spec)


def test_threshold(thm1_spec):
    ll = math.log(math.log(1e6))
    assert threshold(1e6, thm1_spec, 1.5) == pytest.approx(math.sqrt(2 * ll) * 1.5)
    spec = SeriesSpec(Regime.thm1, drift=DriftSchedule.canonical(0.3))
    assert threshold(1e6, spec, 1.5) == pytest.approx(
        math.sqrt(2 * ll) * (1.5 + 0.3 / ll)
    )


def test_drift_schedules():
    assert DriftSchedule.zero().a_n(1e6, 1.2) == 0.0
    canonical = DriftSchedule.canonical(0.3)
    assert canonical.a_n(1e6, 1.2) * math.log(math.log(1e6)) == pytest.approx(0.3)
    with pytest.raises(DomainError):
        DriftSchedule.canonical(math.inf)


@pytest.mark.parametrize("regime", [Regime.thm1, Regime.thm2])
def test_evaluate_series_meets_tolerance(regime):
    spec = SeriesSpec(regime)
    epsilon = 1.3 if regime == Regime.thm1 else 0.5
    result = evaluate_series(spec, epsilon, tol=1e-8)
    assert result.value > 0
    assert result.error_bound <= 1e-8 * result.value
    assert set(result.breakdown) == set(BREAKDOWN_KEYS)
    assert result.error_bound == pytest.approx(math.fsum(result.breakdown.values()))
    assert result.value == pytest.approx(result.head_sum + result.tail_estimate)
    assert result.relative_error <= 1e-8


def test_remainder_completes_the_head(thm1_spec):
    result = evaluate_series(thm1_spec, 2.0, tol=1e-9)
    estimate, bound = series_remainder(thm1_spec, 2.0, result.n_splice)
    assert estimate == pytest.approx(result.tail_estimate, rel=1e-4)
    assert bound >= 0
    # larger start, smaller remainder
    assert series_remainder(thm1_spec, 2.0, 10 * result.n_splice)[0] < estimate


def test_series_decreases_in_epsilon(thm1_spec):
    values = [evaluate_series(thm1_spec, eps).value for eps in (1.2, 1.5, 2.0, 3.0)]
    assert all(later < earlier for earlier, later in zip(values, values[1:]))


def test_sup_model_dominates_abs():
    abs_spec = SeriesSpec(Regime.thm1, model=TailModel.abs_normal())
    sup_spec = SeriesSpec(Regime.thm1, model=TailModel.sup_wiener())
    assert sup_spec.model.statistic == Statistic.max
    assert evaluate_series(sup_spec, 1.5).value > evaluate_series(abs_spec, 1.5).value


@pytest.mark.parametrize("epsilon", [1.0, 0.9, 0.0, -1.0, math.nan])
def test_divergent_epsilon(thm1_spec, epsilon):
    with pytest.raises(DivergentParametersError):
        evaluate_series(thm1_spec, epsilon)


def test_divergent_with_weights():
    spec = SeriesSpec(Regime.thm1, WeightExponents(a=1.0))
    with pytest.raises(DivergentParametersError):
        evaluate_series(spec, math.sqrt(2.0))


def test_evaluate_series_arguments(thm1_spec):
    with pytest.raises(DomainError):
        evaluate_series(thm1_spec, 1.5, tol=0.0)
    with pytest.raises(DomainError):
        evaluate_series(thm1_spec, 1.5, n_splice=4)


def test_spec_rejects_bad_weights_and_sigma():
    with pytest.raises(DomainError):
        SeriesSpec(Regime.thm1, WeightExponents(a=-1.0))
    with pytest.raises(DomainError):
        SeriesSpec(Regime.thm2, WeightExponents(b=-1.0))
    with pytest.raises(DomainError):
        SeriesSpec(Regime.thm1, sigma=0.0)


def test_normalizer(thm1_spec, thm2_spec):
    assert normalizer(thm1_spec, 1.1) == pytest.approx(math.sqrt(0.21))
    assert normalizer(thm2_spec, 0.1) == pytest.approx(0.01)


def test_default_grid():
    grid = default_grid(Regime.thm1, WeightExponents(a=1.0))
    assert all(eps > math.sqrt(2.0) for eps in grid)
    assert grid == sorted(grid, reverse=True)
    assert default_grid(Regime.thm2, WeightExponents())[-1] == 0.01


def test_thm1_sweep_approaches_one(thm1_spec):
    grid = [math.sqrt(1 + gap) for gap in (1e-2, 1e-3, 1e-4)]
    rows = epsilon_sweep(thm1_spec, grid)
    assert [row.epsilon for row in rows] == grid
    assert not any(row.failed for row in rows)
    deviations = [abs(row.ratio - 1.0) for row in rows]
    assert deviations[0] < 0.15
    assert deviations[1] < 0.05
    assert deviations[2] < 0.03
    assert deviations[0] >= deviations[1] >= deviations[2]
    for row in rows:
        assert row.limit == pytest.approx(1.0)
        assert row.ratio_error < 1e-6


def test_thm1_sweep_with_canonical_drift():
    spec = SeriesSpec(Regime.thm1, drift=DriftSchedule.canonical(0.3))
    assert spec.limit == pytest.approx(math.exp(-0.6))
    (row,) = epsilon_sweep(spec, [math.sqrt(1.001)])
    assert row.ratio == pytest.approx(1.0, abs=0.05)


def test_thm2_sweep_approaches_one(thm2_spec):
    rows = epsilon_sweep(thm2_spec, [0.05, 0.01])
    assert rows[0].ratio == pytest.approx(1.0, abs=0.01)
    assert rows[1].ratio == pytest.approx(1.0, abs=0.001)


def test_thm2_sweep_with_bounded_drift():
    spec = SeriesSpec(Regime.thm2, drift=DriftSchedule.bounded(0.5))
    rows = epsilon_sweep(spec, [0.05, 0.01])
    assert abs(rows[1].ratio - 1.0) < 0.05
    assert abs(rows[1].ratio - 1.0) < abs(rows[0].ratio - 1.0)


def test_sweep_workers_do_not_change_rows(thm2_spec):
    grid = [0.5, 0.2, 0.1]
    serial = epsilon_sweep(thm2_spec, grid, workers=1)
    threaded = epsilon_sweep(thm2_spec, grid, workers=3)
    assert [row.to_dict() for row in serial] == [row.to_dict() for row in threaded]


def test_sweep_grid_checks(thm1_spec):
    assert epsilon_sweep(thm1_spec, []) == []
    with pytest.raises(DivergentParametersError):
        epsilon_sweep(thm1_spec, [1.5, 1.0])
    with pytest.raises(DomainError):
        epsilon_sweep(thm1_spec, [1.2, 1.5])


def test_normalized_value(thm2_spec):
    assert normalized_value(thm2_spec, 0.5) == pytest.approx(
        0.25 * evaluate_series(thm2_spec, 0.5).value
    )


def test_empirical_model_head_only():
    table = EmpiricalTailTable(
        samples=np.array([0.5, 1.0, 2.0]), statistic=Statistic.abs, n=64, paths=3
    )
    assert table.tail(1.0) == pytest.approx(2 / 3)
    assert table.tail(2.5) == 0.0
    spec = SeriesSpec(Regime.thm1, model=TailModel.empirical(table))
    result = evaluate_series(spec, 2.0, n_splice=1000)
    assert result.error_bound == 0.0
    assert result.tail_estimate == 0.0
    assert result.head_terms == 1000


def test_empirical_model_needs_zero_tail_beyond_splice():
    table = EmpiricalTailTable(
        samples=np.array([10.0]), statistic=Statistic.abs, n=64, paths=1
    )
    spec = SeriesSpec(Regime.thm1, model=TailModel.empirical(table))
    with pytest.raises(DomainError):
        evaluate_series(spec, 1.5, n_splice=1000)
    with pytest.raises(DomainError):
        series_remainder(spec, 1.5, 1000)


def test_tail_model_consistency():
    table = EmpiricalTailTable(
        samples=np.array([1.0]), statistic=Statistic.abs, n=1, paths=1
    )
    with pytest.raises(DomainError):
        TailModel(TailKind.abs_normal, table=table)


def test_weight_reference_values():
    spec = SeriesSpec(Regime.thm1, WeightExponents(a=1.0))
    assert weight(10, spec) == pytest.approx(math.log(10) / 10)
    # log 2 = loglog 2 = 1 by convention
    assert weight(2, SeriesSpec(Regime.thm2)) == 0.5


def test_thm2_sup_model_near_its_limit():
    spec = SeriesSpec(Regime.thm2, model=TailModel.sup_wiener())
    assert spec.limit == pytest.approx(0.9159655942, rel=1e-9)
    assert normalized_value(spec, 0.05) == pytest.approx(spec.limit, rel=0.1)


def test_sigma_cancels_in_analytic_models():
    unit = SeriesSpec(Regime.thm1)
    scaled = SeriesSpec(Regime.thm1, sigma=3.0)
    assert normalized_value(scaled, 1.5) == normalized_value(unit, 1.5)


def test_thm2_weighted_sweep():
    spec = SeriesSpec(Regime.thm2, WeightExponents(b=1.0))
    assert spec.limit == pytest.approx(0.375)
    rows = epsilon_sweep(spec, [0.5, 0.2, 0.1, 0.05])
    deviations = [abs(row.ratio - 1.0) for row in rows]
    assert deviations[-1] < 0.05
    assert deviations[-1] < deviations[0]
