from __future__ import annotations

import math

import numpy as np
import pytest

from lilrates.errors import DomainError
from lilrates.lab.distributions import Normal, TwoSidedPareto, UniformSym
from lilrates.lab.moments import Verdict, co13_verdict, moment_report
from lilrates.limits import WeightExponents


def test_boundary_pareto_fails_both():
    report = moment_report(TwoSidedPareto(2.0))
    assert report.co12 == Verdict.failed
    assert report.co13 == Verdict.failed
    assert report.functional == math.inf
    summary = report.summary()
    assert summary["co1.2"] == "fail"
    assert summary["co1.3"] == "fail"
    assert summary["co1.3_heuristic"] is True


@pytest.mark.parametrize("dist", [Normal(), UniformSym(), TwoSidedPareto(3.0)])
def test_light_tails_pass(dist):
    report = moment_report(dist)
    assert report.co12 == Verdict.passed
    assert report.co13 == Verdict.passed
    assert report.sufficient_co13
    assert report.ex == 0.0
    assert report.ex2 == pytest.approx(dist.variance)


def test_profile_points():
    report = moment_report(TwoSidedPareto(3.0), t_grid=[10.0, 100.0])
    assert [pt.t for pt in report.profile] == [10.0, 100.0]
    first = report.profile[0]
    assert first.tail_second_moment == pytest.approx(0.3)
    assert first.profile == pytest.approx(first.loglog_t * 0.3)
    # a short grid gives no verdict
    assert report.co13 == Verdict.indeterminate


def test_implied_by_co12():
    dist = Normal()
    assert moment_report(dist, WeightExponents(a=0.5, b=0.0)).implied_by_co12
    assert moment_report(dist, WeightExponents(a=0.0, b=2.0)).implied_by_co12
    assert not moment_report(dist, WeightExponents(a=0.0, b=1.0)).implied_by_co12


def test_flat_profile_fails():
    grid = np.geomspace(1e6, 1e7, 11)
    assert co13_verdict(grid, np.full(grid.size, 0.7)) == Verdict.failed
    decaying = 1.0 / grid
    assert co13_verdict(grid, decaying) == Verdict.passed


@pytest.mark.parametrize("grid", [[], [10.0, 5.0], [-1.0, 10.0]])
def test_bad_grid(grid):
    with pytest.raises(DomainError):
        moment_report(Normal(), t_grid=grid)


def test_rademacher_passes_everything():
    from lilrates.lab.distributions import Rademacher

    report = moment_report(Rademacher(), WeightExponents(a=2.0, b=-0.25))
    assert report.functional == 1.0
    assert report.co12 == Verdict.passed
    assert report.co13 == Verdict.passed


def test_pareto_profile_decays():
    report = moment_report(TwoSidedPareto(2.5), WeightExponents(a=0.0, b=1.0))
    assert report.co13 == Verdict.passed
    last = report.profile[-1]
    assert last.tail_second_moment == pytest.approx(5.0 * last.t**-0.5)
    assert report.liminf_proxy == pytest.approx(last.profile)
