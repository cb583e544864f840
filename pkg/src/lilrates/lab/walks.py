""" Random walks S_k = X_1 + … + X_k of i.i.d. increments

    Every path reads its own stream (see streams) in pieces of STEP_PIECE
    increments, so a path's values do not depend on which other paths are
    simulated nor on the number of workers. Chunks are reduced in order."""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from lilrates.errors import DomainError
from lilrates.lab.distributions import Distribution
from lilrates.lab.streams import chunk_bounds, stream_generator
from lilrates.limits import Statistic
from lilrates.series import EmpiricalTailTable

# increments drawn per generator call
STEP_PIECE = 4096
MIN_TAIL_PATHS = 100


@dataclass
class WalkSummary:
    n: int
    s_n: float
    m_n: float
    stream: int
    delta_n: float | None = None


@dataclass
class WalkStatistics:
    """per-path statistics (paths × checkpoints), in the law's own units"""

    checkpoints: np.ndarray
    absolute: np.ndarray
    maximum: np.ndarray | None
    delta: np.ndarray | None
    seed: int

    @property
    def paths(self) -> int:
        return self.absolute.shape[0]

    def of(self, statistic: Statistic) -> np.ndarray:
        if statistic == Statistic.abs:
            return self.absolute
        if self.maximum is None:
            raise DomainError("running maximum was not recorded")
        return self.maximum


@dataclass
class TailEstimate:
    p_hat: float
    std_err: float
    paths: int

    @classmethod
    def from_hits(cls, hits: int, paths: int) -> TailEstimate:
        p_hat = hits / paths
        return cls(
            p_hat=p_hat, std_err=math.sqrt(p_hat * (1.0 - p_hat) / paths), paths=paths
        )


def _check_checkpoints(checkpoints: Sequence[int]) -> np.ndarray:
    points = np.asarray(checkpoints, dtype=np.int64)
    if points.ndim != 1 or not points.size:
        raise DomainError("at least one checkpoint is required")
    if points[0] < 1 or np.any(np.diff(points) <= 0):
        raise DomainError("checkpoints must be increasing integers >= 1")
    return points


def _block_sum_chunk(
    dist: Distribution, points: np.ndarray, start: int, stop: int, seed: int
) -> np.ndarray:
    """S_n at checkpoints advancing by exact block sums"""
    sizes = np.diff(np.concatenate([[0], points]))
    out = np.empty((stop - start, points.size))
    for row, stream in enumerate(range(start, stop)):
        rng = stream_generator(seed, stream)
        out[row] = np.cumsum(dist.sample_block_sums(rng, sizes))
    return out


def _simulate_chunk(
    dist: Distribution,
    points: np.ndarray,
    start: int,
    stop: int,
    seed: int,
    *,
    need_max: bool,
    truncate_at: float | None,
) -> dict[str, np.ndarray]:
    """statistics of paths [start, stop) at each checkpoint, unit scale"""
    if not need_max and truncate_at is None and dist.has_block_sums:
        return {"sum": _block_sum_chunk(dist, points, start, stop, seed)}

    rows = stop - start
    gens = [stream_generator(seed, stream) for stream in range(start, stop)]
    out = {"sum": np.empty((rows, points.size))}
    if need_max:
        out["maximum"] = np.empty((rows, points.size))
    if truncate_at is not None:
        out["delta"] = np.empty((rows, points.size))
        # compare unit draws against the cut-off brought to unit scale
        unit_cut = truncate_at / dist.scale

    s_last = np.zeros(rows)
    m_last = np.zeros(rows)
    big_last = np.zeros(rows)
    d_last = np.zeros(rows)
    pos, col = 0, 0
    n_max = int(points[-1])
    steps = np.empty((rows, STEP_PIECE))
    while pos < n_max:
        width = min(STEP_PIECE, n_max - pos)
        piece = steps[:, :width]
        for row, rng in enumerate(gens):
            piece[row] = dist.sample_unit(rng, width)
        walk = s_last[:, None] + np.cumsum(piece, axis=1)
        if need_max:
            running = np.maximum.accumulate(np.abs(walk), axis=1)
            running = np.maximum(running, m_last[:, None])
        if truncate_at is not None:
            # S̄'_k - S_k = -Σ_{j<=k} X_j·1{|X_j| > c_n} for symmetric laws
            large = np.where(np.abs(piece) > unit_cut, piece, 0.0)
            excess = big_last[:, None] + np.cumsum(large, axis=1)
            deviation = np.maximum.accumulate(np.abs(excess), axis=1)
            deviation = np.maximum(deviation, d_last[:, None])

        while col < points.size and points[col] <= pos + width:
            at = int(points[col]) - pos - 1
            out["sum"][:, col] = walk[:, at]
            if need_max:
                out["maximum"][:, col] = running[:, at]  # pyright: ignore
            if truncate_at is not None:
                out["delta"][:, col] = deviation[:, at]  # pyright: ignore
            col += 1

        s_last = walk[:, -1]
        if need_max:
            m_last = running[:, -1]  # pyright: ignore
        if truncate_at is not None:
            big_last = excess[:, -1]  # pyright: ignore
            d_last = deviation[:, -1]  # pyright: ignore
        pos += width
    return out


def walk_statistics(
    dist: Distribution,
    checkpoints: Sequence[int],
    paths: int,
    seed: int,
    *,
    workers: int = 1,
    need_max: bool = True,
    truncate_at: float | None = None,
    progress: Callable[[int], None] | None = None,
) -> WalkStatistics:
    """|S_n|, M_n (and Δ_n when truncate_at is set) at every checkpoint

    One pass per path covers all checkpoints. Without need_max and truncation,
    laws with exact block-sum samplers skip the step-by-step walk.
    `progress` is called with the number of finished chunks, in order."""
    points = _check_checkpoints(checkpoints)
    if paths < 1:
        raise DomainError(f"at least one path is required (got {paths})")

    def run(bounds: tuple[int, int]) -> dict[str, np.ndarray]:
        return _simulate_chunk(
            dist,
            points,
            bounds[0],
            bounds[1],
            seed,
            need_max=need_max,
            truncate_at=truncate_at,
        )

    chunks = list(chunk_bounds(paths))
    results: list[dict[str, np.ndarray]] = []
    if workers <= 1:
        iterator = map(run, chunks)
        for index, result in enumerate(iterator):
            results.append(result)
            if progress:
                progress(index + 1)
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for index, result in enumerate(executor.map(run, chunks)):
                results.append(result)
                if progress:
                    progress(index + 1)

    def gather(key: str) -> np.ndarray | None:
        if key not in results[0]:
            return None
        return np.concatenate([result[key] for result in results]) * dist.scale

    return WalkStatistics(
        checkpoints=points,
        absolute=np.abs(np.concatenate([result["sum"] for result in results]))
        * dist.scale,
        maximum=gather("maximum"),
        delta=gather("delta"),
        seed=seed,
    )


def sample_walk(
    dist: Distribution,
    n: int,
    stream: int,
    seed: int,
    *,
    truncate_at: float | None = None,
) -> WalkSummary:
    """S_n and M_n = max_{k<=n} |S_k| of one path"""
    if n < 1:
        raise DomainError(f"walk length must be >= 1 (got {n})")
    out = _simulate_chunk(
        dist,
        np.asarray([n], dtype=np.int64),
        stream,
        stream + 1,
        seed,
        need_max=True,
        truncate_at=truncate_at,
    )
    return WalkSummary(
        n=n,
        s_n=float(out["sum"][0, 0]) * dist.scale,
        m_n=float(out["maximum"][0, 0]) * dist.scale,
        stream=stream,
        delta_n=(
            float(out["delta"][0, 0]) * dist.scale if truncate_at is not None else None
        ),
    )


def tail_from(values: np.ndarray, threshold: float) -> TailEstimate:
    values = np.asarray(values)
    hits = int(np.count_nonzero(values >= threshold))
    return TailEstimate.from_hits(hits, values.size)


def estimate_tail(
    dist: Distribution,
    n: int,
    threshold: float,
    statistic: Statistic,
    paths: int,
    seed: int,
    *,
    workers: int = 1,
    progress: Callable[[int], None] | None = None,
) -> TailEstimate:
    """fraction of paths with M_n (max) or |S_n| (abs) >= threshold

    Both statistics come from the same full paths, so at equal seed the max
    estimate is never below the abs one."""
    if paths < MIN_TAIL_PATHS:
        raise DomainError(f"tail estimation needs >= {MIN_TAIL_PATHS} paths")
    if n < 1:
        raise DomainError(f"walk length must be >= 1 (got {n})")
    stats = walk_statistics(
        dist, [n], paths, seed, workers=workers, need_max=True, progress=progress
    )
    return tail_from(stats.of(statistic)[:, 0], threshold)


def fit_empirical_tail(
    dist: Distribution,
    n: int,
    statistic: Statistic,
    paths: int,
    seed: int,
    *,
    workers: int = 1,
) -> EmpiricalTailTable:
    """empirical tail table of stat/(σ√n)"""
    sigma = dist.sigma
    if not math.isfinite(sigma):
        raise DomainError(f"{dist} has infinite variance")
    stats = walk_statistics(
        dist,
        [n],
        paths,
        seed,
        workers=workers,
        need_max=statistic == Statistic.max,
    )
    samples = stats.of(statistic)[:, 0] / (sigma * math.sqrt(n))
    return EmpiricalTailTable(samples=samples, statistic=statistic, n=n, paths=paths)
