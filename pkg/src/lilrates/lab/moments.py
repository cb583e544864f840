""" Moment conditions on the increment law

    - co1.2: E[X²(log|X|)^a(loglog|X|)^(b-1)] < ∞
    - co1.3: E[X²·1{|X| >= t}] = o(1/loglog t)

    co1.2 is decided from closed-form criteria of the catalogue ; co1.3 is
    asymptotic, so its verdict is a heuristic read of the profile
    t ↦ loglog(t)·E[X²·1{|X| >= t}] over the top decade of a finite t-grid."""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from lilrates.analytic import loglog
from lilrates.errors import DomainError
from lilrates.lab.distributions import Distribution
from lilrates.limits import WeightExponents

# smallest t_max for which co1.3 gets a pass/fail verdict
VERDICT_T_MIN = 1e6
# log-log slope of the profile counting as decay (or flatness)
SLOPE_TOL = 0.05
DEFAULT_T_GRID = tuple(float(t) for t in np.geomspace(10.0, 1e8, 71))


class Verdict(enum.Enum):
    passed = "pass"
    failed = "fail"
    indeterminate = "indeterminate"


@dataclass
class ProfilePoint:
    t: float
    loglog_t: float
    tail_second_moment: float
    profile: float


@dataclass
class MomentReport:
    ex: float
    ex2: float
    functional: float
    profile: list[ProfilePoint]
    co12: Verdict
    co13: Verdict
    sufficient_co13: bool
    implied_by_co12: bool
    liminf_proxy: float
    heuristic: bool = True
    weights: WeightExponents = field(default_factory=WeightExponents)

    def summary(self) -> dict:
        return {
            "EX": self.ex,
            "EX2": self.ex2,
            "functional": self.functional,
            "co1.2": self.co12.value,
            "co1.3": self.co13.value,
            "co1.3_heuristic": self.heuristic,
            "sufficient_co1.3": self.sufficient_co13,
            "implied_by_co1.2": self.implied_by_co12,
            "liminf_proxy": self.liminf_proxy,
        }


def co13_verdict(t_grid: np.ndarray, profile: np.ndarray) -> Verdict:
    """decreasing-envelope reading of the profile over the top decade"""
    if t_grid[-1] < VERDICT_T_MIN:
        return Verdict.indeterminate
    top = profile[t_grid >= t_grid[-1] / 10.0]
    if np.any(np.isinf(top)):
        return Verdict.failed
    if np.all(top == 0):
        return Verdict.passed
    if top[-1] == 0 and np.all(np.diff(top) <= 0):
        return Verdict.passed
    if np.any(top <= 0) or top.size < 2:
        return Verdict.indeterminate

    t_top = t_grid[t_grid >= t_grid[-1] / 10.0]
    slope = float(np.polyfit(np.log(t_top), np.log(top), 1)[0])
    if slope <= -SLOPE_TOL and np.all(np.diff(top) <= 0):
        return Verdict.passed
    if abs(slope) < SLOPE_TOL and top.min() > 0:
        return Verdict.failed
    return Verdict.indeterminate


def moment_report(
    dist: Distribution,
    w: WeightExponents | None = None,
    t_grid: Sequence[float] | None = None,
) -> MomentReport:
    w = w or WeightExponents()
    grid = np.asarray(t_grid if t_grid is not None else DEFAULT_T_GRID, dtype=float)
    if grid.ndim != 1 or not grid.size:
        raise DomainError("t-grid must hold at least one value")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise DomainError("t-grid must be positive and increasing")

    points = []
    for t in grid:
        ll = float(loglog(t))
        moment = dist.tail_second_moment(float(t))
        points.append(ProfilePoint(float(t), ll, moment, ll * moment))
    profile = np.asarray([pt.profile for pt in points])

    functional = dist.functional(w.a, w.b)
    top = profile[grid >= grid[-1] / 10.0]
    return MomentReport(
        ex=dist.mean,
        ex2=dist.variance,
        functional=functional,
        profile=points,
        co12=Verdict.passed if math.isfinite(functional) else Verdict.failed,
        co13=co13_verdict(grid, profile),
        sufficient_co13=math.isfinite(dist.functional(0.0, 2.0)),
        implied_by_co12=w.a > 0 or (w.a == 0 and w.b >= 2),
        liminf_proxy=float(top.min()),
        weights=w,
    )
