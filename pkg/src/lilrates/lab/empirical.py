""" Monte Carlo assembly of the weighted tail series on a geometric n-grid

    The tail probability is estimated once per block, at a representative n,
    and multiplied by the exact weight of the whole block. Blocks are centred
    on the grid points n_min·γ^k ; every n below the first block is its own
    single-point block so the series starts at n = 1."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from lilrates.constants import logger
from lilrates.errors import DomainError, GridInsufficientError
from lilrates.lab.distributions import Distribution
from lilrates.lab.walks import tail_from, walk_statistics
from lilrates.limits import Statistic
from lilrates.series import (
    SeriesResult,
    SeriesSpec,
    TailModel,
    series_remainder,
    threshold,
    weight,
)

DEFAULT_GRID_TOL = 0.05
# sum of block weights is computed in slices of this many indices
WEIGHT_SLICE = 1_000_000


@dataclass
class Block:
    lo: int
    hi: int
    n: int
    weight: float
    p_hat: float = 0.0
    std_err: float = 0.0
    bias: float = 0.0


@dataclass
class EmpiricalSeriesResult(SeriesResult):
    grid_points: int = 0
    paths: int = 0
    blocks: list[Block] = field(default_factory=list)


def geometric_blocks(
    n_min: int, n_max: int, ratio: float
) -> list[tuple[int, int, int]]:
    """(lo, hi, representative n) of every block covering [1, hi_last]"""
    if not 1 < ratio <= 2:
        raise DomainError(f"grid ratio must lie in (1, 2] (got {ratio})")
    if n_min < 1 or n_max < n_min:
        raise DomainError(f"grid needs 1 <= n_min <= n_max (got {n_min}, {n_max})")
    count = int(math.floor(math.log(n_max / n_min) / math.log(ratio) + 1e-9)) + 1
    edges = sorted(
        {max(1, round(n_min * ratio ** (k - 0.5))) for k in range(count + 1)}
    )
    blocks = [(n, n, n) for n in range(1, edges[0])]
    for lo, nxt in zip(edges, edges[1:], strict=False):
        hi = nxt - 1
        rep = min(max(round(math.sqrt(lo * hi)), lo), hi)
        blocks.append((lo, hi, rep))
    return blocks


def _block_weight(spec: SeriesSpec, lo: int, hi: int) -> float:
    parts = []
    for start in range(lo, hi + 1, WEIGHT_SLICE):
        n = np.arange(start, min(start + WEIGHT_SLICE, hi + 1), dtype=np.float64)
        parts.append(float(np.sum(weight(n, spec))))
    return math.fsum(parts)


def _reference_model(statistic: Statistic) -> TailModel:
    if statistic == Statistic.max:
        return TailModel.sup_wiener()
    return TailModel.abs_normal()


def assemble_empirical_series(
    dist: Distribution,
    spec: SeriesSpec,
    epsilon: float,
    *,
    n_min: int = 16,
    n_max: int = 1 << 20,
    ratio: float = 2.0,
    paths: int = 10_000,
    seed: int = 0,
    workers: int = 1,
    grid_tol: float = DEFAULT_GRID_TOL,
    progress: Callable[[int], None] | None = None,
) -> EmpiricalSeriesResult:
    """Σ w(n)·P(stat_n >= σφ(n)(ε + a_n)) from simulated walks of `dist`

    The statistic (|S_n| or M_n) follows spec.model. error_bound sums three
    times the weighted standard errors, the within-block variation of the
    reference tail and a majorant of the terms beyond the grid."""
    if paths < 1:
        raise DomainError(f"empirical series needs at least one path (got {paths})")
    spec.check_epsilon(epsilon)
    sigma = dist.sigma
    if not math.isfinite(sigma):
        raise DomainError(f"{dist} has infinite variance")
    statistic = spec.model.statistic

    blocks = [
        Block(lo=lo, hi=hi, n=rep, weight=_block_weight(spec, lo, hi))
        for lo, hi, rep in geometric_blocks(n_min, n_max, ratio)
    ]
    checkpoints = [block.n for block in blocks]
    last = blocks[-1].hi
    logger.debug(
        f"empirical series: {len(blocks)} blocks up to n={last}, {paths} paths"
    )

    stats = walk_statistics(
        dist,
        checkpoints,
        paths,
        seed,
        workers=workers,
        need_max=statistic == Statistic.max,
        progress=progress,
    )
    values = stats.of(statistic)

    reference = _reference_model(statistic)
    for index, block in enumerate(blocks):
        bar = sigma * math.sqrt(block.n) * float(threshold(block.n, spec, epsilon))
        estimate = tail_from(values[:, index], bar)
        block.p_hat, block.std_err = estimate.p_hat, estimate.std_err
        if block.hi > block.lo:
            ends = reference.tail(
                threshold(np.asarray([block.lo, block.hi]), spec, epsilon)
            )
            block.bias = block.weight * float(abs(ends[0] - ends[1]))

    value = math.fsum(block.weight * block.p_hat for block in blocks)
    monte_carlo = 3.0 * math.fsum(block.weight * block.std_err for block in blocks)
    bias = math.fsum(block.bias for block in blocks)

    # terms beyond the grid under the reference tails: P(|N| >= x) for |S_n|,
    # 2·P(|N| >= x) >= P(sup|W| >= x) for M_n
    majorant_spec = SeriesSpec(
        regime=spec.regime,
        weights=spec.weights,
        drift=spec.drift,
        sigma=spec.sigma,
        model=TailModel.abs_normal(),
    )
    remainder, remainder_bound = series_remainder(majorant_spec, epsilon, last)
    beyond_grid = (remainder + remainder_bound) * (
        2.0 if statistic == Statistic.max else 1.0
    )

    breakdown = {"monte_carlo": monte_carlo, "block": bias, "beyond_grid": beyond_grid}
    result = EmpiricalSeriesResult(
        value=value,
        head_terms=last,
        head_sum=value,
        tail_estimate=0.0,
        error_bound=math.fsum(breakdown.values()),
        breakdown=breakdown,
        n_splice=last,
        grid_points=len(blocks),
        paths=paths,
        blocks=blocks,
    )
    if beyond_grid > grid_tol * value:
        raise GridInsufficientError(
            f"terms beyond n={last} may reach {beyond_grid:.3g}, "
            f"above {grid_tol:g}·{value:.4g}: extend the grid or raise epsilon",
            result=result,
        )
    return result
