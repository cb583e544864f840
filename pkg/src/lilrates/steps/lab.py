from __future__ import annotations

import math
from typing import Any

import numpy as np
import progressbar  # type: ignore

from lilrates.analytic import phi
from lilrates.constants import ExitCode, Global, logger
from lilrates.errors import DomainError, GridInsufficientError
from lilrates.lab.empirical import EmpiricalSeriesResult, assemble_empirical_series
from lilrates.lab.moments import moment_report
from lilrates.lab.streams import nb_chunks
from lilrates.lab.truncation import (
    TruncationReport,
    effective_drift,
    truncation_diagnostics,
)
from lilrates.lab.walks import TailEstimate, estimate_tail
from lilrates.series import DriftSchedule
from lilrates.steps import Step, make_envelope

TAIL_COLUMNS = [
    "dist",
    "n",
    "threshold",
    "statistic",
    "paths",
    "seed",
    "p_hat",
    "std_err",
]
SERIES_COLUMNS = [
    "epsilon",
    "series",
    "error_bound",
    "monte_carlo",
    "block",
    "beyond_grid",
    "grid_points",
    "paths",
]
TRUNCATION_COLUMNS = [
    "n",
    "p",
    "c_n",
    "B_n",
    "B_n_over_n",
    "delta_threshold",
    "exceedance",
    "std_err",
    "paths",
]
MOMENTS_COLUMNS = ["t", "loglog_t", "tail_second_moment", "profile"]


class ChunkFeedback:
    """progressbar over simulated path chunks"""

    def __init__(self, paths: int, what: str):
        widgets = [
            "[",
            progressbar.Timer(),
            "] ",
            progressbar.Counter(),
            f"/{nb_chunks(paths)} chunks of {what}",
            progressbar.Bar(),
            " (",
            progressbar.ETA(),
            ")",
        ]
        self.bar = progressbar.ProgressBar(max_value=nb_chunks(paths), widgets=widgets)

    def update(self, done: int):
        self.bar.update(done)

    def finish(self):
        self.bar.finish()


def tail_threshold(config, dist) -> float:
    """--threshold as given, or ε·σ·φ(n) from --epsilon"""
    if config.threshold is not None:
        return float(config.threshold)
    return float(config.epsilon) * dist.sigma * float(phi(config.n))


class Simulating(Step):
    _name = "Simulating random walks…"

    def run(self, payload: dict[str, Any]) -> int:
        if payload["config"].series:
            return self.run_series(payload)
        return self.run_tail(payload)

    def run_tail(self, payload: dict[str, Any]) -> int:
        config, cache = payload["config"], payload["cache"]
        seed = Global.options.seed_value
        dist = config.distribution()
        threshold = tail_threshold(config, dist)
        if not math.isfinite(threshold):
            logger.error(f"epsilon: {dist.describe()} has no finite sigma")
            return ExitCode.config

        params = {
            "kind": "tail",
            "dist": dist.name,
            "dist_params": dist.params,
            "n": config.n,
            "threshold": threshold,
            "statistic": config.stat,
            "paths": config.paths,
            "seed": seed,
        }
        stored = cache.get(params)
        if stored is not None:
            logger.add_task("Using cached estimate", str(stored))
            estimate = TailEstimate(**stored)
        else:
            logger.start_task(
                f"{config.paths} walks of {dist.describe()}, n={config.n}"
            )
            logger.message()
            feedback = ChunkFeedback(config.paths, "paths")
            try:
                estimate = estimate_tail(
                    dist,
                    config.n,
                    threshold,
                    config.statistic,
                    config.paths,
                    seed,
                    workers=Global.options.workers,
                    progress=feedback.update,
                )
            except DomainError as exc:
                feedback.finish()
                logger.error(str(exc))
                return ExitCode.config
            feedback.finish()
            cache.introduce("tail", params, vars(estimate))

        logger.add_task(
            f"P({config.stat} >= {threshold:.6g})",
            f"{estimate.p_hat:.6g} ± {estimate.std_err:.2g}",
        )
        row = {
            "dist": dist.describe(),
            "n": config.n,
            "threshold": threshold,
            "statistic": config.stat,
            "paths": estimate.paths,
            "seed": seed,
            "p_hat": estimate.p_hat,
            "std_err": estimate.std_err,
        }
        payload["envelope"] = make_envelope(
            payload, TAIL_COLUMNS, [row], summary=vars(estimate)
        )
        return ExitCode.success

    def run_series(self, payload: dict[str, Any]) -> int:
        config, cache = payload["config"], payload["cache"]
        seed = Global.options.seed_value
        dist = config.distribution()
        spec = config.spec()

        params = {
            "kind": "series",
            "dist": dist.name,
            "dist_params": dist.params,
            "regime": config.regime,
            "a": config.a,
            "b": config.b,
            "tau": config.tau,
            "drift": config.drift,
            "epsilon": config.epsilon,
            "statistic": config.stat,
            "grid": [config.n_min, config.n_max, config.ratio],
            "grid_tol": config.grid_tol,
            "paths": config.paths,
            "seed": seed,
        }
        code = ExitCode.success
        row = cache.get(params)
        if row is not None:
            logger.add_task("Using cached series", f"{row['series']:.8g}")
            failed = row.pop("grid_insufficient", False)
        else:
            logger.start_task(
                f"Empirical series of {dist.describe()} at epsilon={config.epsilon}"
            )
            logger.message()
            feedback = ChunkFeedback(config.paths, "paths")
            failed = False
            try:
                result = assemble_empirical_series(
                    dist,
                    spec,
                    config.epsilon,
                    n_min=config.n_min,
                    n_max=config.n_max,
                    ratio=config.ratio,
                    paths=config.paths,
                    seed=seed,
                    workers=Global.options.workers,
                    grid_tol=config.grid_tol,
                    progress=feedback.update,
                )
            except GridInsufficientError as exc:
                logger.warning(str(exc))
                result = exc.result
                failed = True
            except DomainError as exc:
                feedback.finish()
                logger.error(str(exc))
                return ExitCode.config
            feedback.finish()
            row = self.series_row(config.epsilon, result)
            cache.introduce("series", params, {**row, "grid_insufficient": failed})

        if failed:
            code = ExitCode.tolerance
        logger.add_task(
            f"S({config.epsilon})", f"{row['series']:.8g} ± {row['error_bound']:.2g}"
        )
        payload["envelope"] = make_envelope(
            payload,
            SERIES_COLUMNS,
            [row],
            summary={"grid_insufficient": failed, "limit": spec.limit},
        )
        payload["exit_code"] = code
        return ExitCode.success

    @staticmethod
    def series_row(epsilon: float, result: EmpiricalSeriesResult) -> dict[str, Any]:
        return {
            "epsilon": epsilon,
            "series": result.value,
            "error_bound": result.error_bound,
            "monte_carlo": result.breakdown["monte_carlo"],
            "block": result.breakdown["block"],
            "beyond_grid": result.breakdown["beyond_grid"],
            "grid_points": result.grid_points,
            "paths": result.paths,
        }


class RunningTruncation(Step):
    _name = "Running truncation diagnostics…"

    def run(self, payload: dict[str, Any]) -> int:
        config, cache = payload["config"], payload["cache"]
        seed = Global.options.seed_value
        dist = config.distribution()

        params = {
            "kind": "truncation",
            "dist": dist.name,
            "dist_params": dist.params,
            "n": config.n,
            "p": config.p,
            "paths": config.paths,
            "seed": seed,
        }
        row = cache.get(params)
        if row is not None:
            logger.add_task("Using cached diagnostics")
        else:
            feedback = ChunkFeedback(max(config.paths, 1), "paths")
            try:
                report = truncation_diagnostics(
                    dist,
                    config.n,
                    config.params,
                    config.paths,
                    seed,
                    workers=Global.options.workers,
                    progress=feedback.update,
                )
            except DomainError as exc:
                feedback.finish()
                logger.error(str(exc))
                return ExitCode.config
            feedback.finish()
            row = report.to_dict()
            row["B_n"] = row.pop("b_n")
            row["B_n_over_n"] = row.pop("b_n_over_n")
            cache.introduce("truncation", params, row)

        columns = list(TRUNCATION_COLUMNS)
        logger.add_task(f"B_n at n={config.n}", f"{row['B_n']:.10g}")
        if config.epsilon is not None:
            report = TruncationReport(
                **{key.lower(): value for key, value in row.items()}
            )
            drift = effective_drift(
                report,
                config.epsilon,
                float(DriftSchedule.canonical(config.tau).a_n(config.n, 0.0)),
                dist.sigma,
            )
            row = {**row, "effective_drift": drift}
            columns.append("effective_drift")
            logger.add_task("effective drift", f"{drift:.6g}")

        payload["envelope"] = make_envelope(payload, columns, [row], summary=row)
        return ExitCode.success


class CheckingMoments(Step):
    _name = "Checking moment conditions…"

    def run(self, payload: dict[str, Any]) -> int:
        config = payload["config"]
        dist = config.distribution()
        grid = np.geomspace(10.0, config.t_max, config.t_points)
        try:
            report = moment_report(dist, config.weights, grid.tolist())
        except DomainError as exc:
            logger.error(str(exc))
            return ExitCode.config

        summary = report.summary()
        for key in ("co1.2", "co1.3"):
            logger.add_task(f"{key} for {dist.describe()}", str(summary[key]))
        rows = [
            {
                "t": point.t,
                "loglog_t": point.loglog_t,
                "tail_second_moment": point.tail_second_moment,
                "profile": point.profile,
            }
            for point in report.profile
        ]
        payload["envelope"] = make_envelope(
            payload, MOMENTS_COLUMNS, rows, summary=summary
        )
        return ExitCode.success
