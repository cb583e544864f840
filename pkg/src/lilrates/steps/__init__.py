from __future__ import annotations

from typing import Any

from lilrates.constants import ExitCode, Global, logger
from lilrates.results import ResultEnvelope


class Step:
    """StepInterface"""

    # name of step to be overriden
    @property
    def name(self) -> str:
        return getattr(self, "_name", repr(self))

    def __repr__(self):
        return self.__class__.__name__

    def __str__(self):
        return self.name

    def run(self, payload: dict[str, Any]) -> int:
        """actual step implementation. 0 on success"""
        raise NotImplementedError()

    def cleanup(self, payload: dict[str, Any]):
        """clean resources reserved in run()"""
        ...


class VirtualInitStep(Step): ...


def make_envelope(
    payload: dict[str, Any],
    columns: list[str],
    rows: list[dict[str, Any]],
    summary: dict[str, Any] | None = None,
    digits: int | None = None,
) -> ResultEnvelope:
    options = payload["options"]
    return ResultEnvelope(
        command=options.command,
        config=payload["config"].to_dict(),
        seed=options.seed_value,
        seed_source=options.seed_source,
        columns=columns,
        rows=rows,
        summary=summary or {},
        digits=digits,
    )


class GivingFeedback(Step):
    _name: str = "Giving run feedback"

    def run(self, payload: dict[str, Any]) -> int:
        code = payload.get("exit_code", ExitCode.success)
        payload["succeeded"] = code == ExitCode.success
        target = Global.options.csv_path or "(not written)"
        if payload["succeeded"]:
            logger.start_task(f"{Global.options.command} completed")
            logger.succeed_task(str(target))
        else:
            logger.start_task(f"{Global.options.command} completed with failures")
            logger.fail_task(str(target))
        return ExitCode.success
