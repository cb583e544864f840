""" Truncation diagnostics

    X'_nj = X_j·1{|X_j| <= c_n} with c_n = √n/(loglog n)^p, centred into X̄'_nj.
    B_n = Σ_{j<=n} Var(X̄'_nj) comes from the law's truncated moments (never
    simulated) and Δ_n = max_{k<=n} |S̄'_nk - S_k| is simulated."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import asdict, dataclass

from lilrates.analytic import loglog
from lilrates.errors import DomainError
from lilrates.lab.distributions import Distribution
from lilrates.lab.walks import tail_from, walk_statistics


@dataclass(frozen=True)
class TruncationParams:
    p: float = 1.0

    def __post_init__(self):
        if not (0.5 < self.p <= 2.0):
            raise DomainError(
                f"truncation exponent must satisfy 1/2 < p <= 2 (got {self.p})"
            )


@dataclass
class TruncationReport:
    n: int
    p: float
    c_n: float
    b_n: float
    b_n_over_n: float
    delta_threshold: float
    exceedance: float
    std_err: float
    paths: int

    def to_dict(self) -> dict:
        return asdict(self)


def truncation_level(n: int, p: float) -> float:
    """c_n = √n / (loglog n)^p"""
    return math.sqrt(n) / float(loglog(n)) ** p


def delta_threshold(n: int) -> float:
    """√n / (loglog n)²"""
    return truncation_level(n, 2.0)


def b_n(dist: Distribution, n: int, params: TruncationParams, *, quad: bool = False):
    """n·Var(X·1{|X| <= c_n}) ; the truncated mean is 0 for symmetric laws"""
    c_n = truncation_level(n, params.p)
    if quad:
        return n * dist.truncated_second_moment_quad(c_n)
    try:
        return n * dist.truncated_second_moment(c_n)
    except NotImplementedError:
        return n * dist.truncated_second_moment_quad(c_n)


def truncation_diagnostics(
    dist: Distribution,
    n: int,
    params: TruncationParams,
    paths: int = 1000,
    seed: int = 0,
    *,
    workers: int = 1,
    progress: Callable[[int], None] | None = None,
) -> TruncationReport:
    """B_n and the frequency of {Δ_n >= √n/(loglog n)²}

    paths = 0 skips the simulation (exceedance is then NaN)."""
    if n < 1:
        raise DomainError(f"n must be >= 1 (got {n})")
    if paths < 0:
        raise DomainError("paths must be non-negative")
    c_n = truncation_level(n, params.p)
    variance = b_n(dist, n, params)
    bar = delta_threshold(n)

    exceedance, std_err = math.nan, math.nan
    if paths:
        stats = walk_statistics(
            dist,
            [n],
            paths,
            seed,
            workers=workers,
            need_max=False,
            truncate_at=c_n,
            progress=progress,
        )
        estimate = tail_from(stats.delta[:, 0], bar)  # pyright: ignore
        exceedance, std_err = estimate.p_hat, estimate.std_err

    return TruncationReport(
        n=n,
        p=params.p,
        c_n=c_n,
        b_n=variance,
        b_n_over_n=variance / n,
        delta_threshold=bar,
        exceedance=exceedance,
        std_err=std_err,
        paths=paths,
    )


def effective_drift(
    report: TruncationReport, epsilon: float, a_n: float, sigma: float = 1.0
) -> float:
    """a'_n(ε)·loglog n where a'_n(ε) = √(nσ²/B_n)(ε + a_n) - ε

    the drift picked up when thresholds use √B_n instead of σ√n"""
    if report.b_n <= 0:
        raise DomainError("B_n must be positive")
    shifted = math.sqrt(report.n * sigma**2 / report.b_n) * (epsilon + a_n) - epsilon
    return shifted * float(loglog(report.n))
