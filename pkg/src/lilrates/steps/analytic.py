from __future__ import annotations

from typing import Any

from lilrates.constants import ExitCode, Global, logger
from lilrates.errors import DomainError
from lilrates.limits import Regime, limit_constant
from lilrates.series import epsilon_sweep
from lilrates.steps import Step, make_envelope

CONSTANTS_COLUMNS = ["regime", "a", "b", "tau", "statistic", "value"]
SWEEP_COLUMNS = ["epsilon", "series", "normalized", "limit", "ratio", "error_bound"]


class ComputingConstants(Step):
    _name = "Computing limit constants…"

    def run(self, payload: dict[str, Any]) -> int:
        config = payload["config"]
        rows = []
        for statistic in config.statistics:
            logger.start_task(f"{config.regime} constant for {statistic.value}")
            try:
                value = limit_constant(
                    config.regime_, config.weights, config.tau, statistic
                )
            except DomainError as exc:
                logger.fail_task(str(exc))
                return ExitCode.config
            logger.succeed_task(f"{value:.10g}")
            rows.append(
                {
                    "regime": config.regime,
                    # a does not enter thm2 weights
                    "a": float(config.a) if config.regime_ == Regime.thm1 else None,
                    "b": float(config.b),
                    "tau": float(config.tau) if config.regime_ == Regime.thm1 else None,
                    "statistic": statistic.value,
                    "value": value,
                }
            )

        payload["envelope"] = make_envelope(
            payload,
            CONSTANTS_COLUMNS,
            rows,
            summary={row["statistic"]: row["value"] for row in rows},
            digits=10,
        )
        return ExitCode.success


class RunningSweep(Step):
    _name = "Sweeping epsilon toward the critical value…"

    def run(self, payload: dict[str, Any]) -> int:
        config = payload["config"]
        spec = config.spec()
        logger.add_task(
            f"{len(config.grid)} epsilon values above {spec.critical:g}",
            f"limit constant {spec.limit:.10g}",
        )
        try:
            sweep = epsilon_sweep(
                spec,
                config.grid,
                config.tol,
                workers=Global.options.workers,
                n_splice=config.splice,
            )
        except DomainError as exc:
            logger.error(str(exc))
            return ExitCode.config

        for row in sweep:
            logger.start_task(f"epsilon={row.epsilon:.8g}")
            text = f"ratio {row.ratio:.8g} (± {row.ratio_error:.2g})"
            if row.failed:
                logger.fail_task(f"{text}: {row.message}")
            else:
                logger.succeed_task(text)

        failed = [row for row in sweep if row.failed]
        rows = [row.to_dict() for row in sweep]
        final_ratio = sweep[-1].ratio if sweep else None
        rows.append({"epsilon": "summary", "ratio": final_ratio})
        payload["envelope"] = make_envelope(
            payload,
            SWEEP_COLUMNS,
            rows,
            summary={
                "limit": spec.limit,
                "final_ratio": final_ratio,
                "failed_rows": len(failed),
            },
        )
        if failed:
            logger.warning(f"{len(failed)} row(s) above tolerance {config.tol:g}")
            payload["exit_code"] = ExitCode.tolerance
        return ExitCode.success
