from __future__ import annotations

from typing import Any

from lilrates.constants import ExitCode, Global, Options, banner, logger
from lilrates.steps.machine import StepMachine


class Runner:
    def __init__(
        self,
        *,
        command: str,
        config: str | None = None,
        output: str | None = None,
        cache_dir: str | None = None,
        seed: int | None = None,
        workers: int = 1,
        show_cache: bool = False,
        debug: bool = False,
        params: dict[str, Any] | None = None,
    ):
        Global.options = Options(
            command=command,
            CONFIG=config,
            OUTPUT=output,
            CACHE_DIR=cache_dir,
            seed=seed,
            workers=workers,
            show_cache=show_cache,
            debug=debug,
            params=params or {},
        )
        Global._ready = True
        self.machine: StepMachine | None = None

    def run(self) -> int:
        self.machine = StepMachine(
            Global.options.command,
            options=Global.options,
            succeeded=False,
            exit_code=ExitCode.success,
        )
        if not Global.options.cache_dir:
            self.machine.remove_step("ApplyCachePolicy")
        if not Global.options.show_cache:
            self.machine.remove_step("PrintingCache")

        logger.message(banner)

        for step in self.machine:
            logger.start_step(step.name)
            res = step.run(self.machine.payload)
            logger.end_step()
            if res != 0:
                logger.error(f"Step “{step!r}” returned {res}")
                return int(res)
        return int(self.machine.payload["exit_code"])

    @property
    def payload(self) -> dict[str, Any]:
        return self.machine.payload if self.machine else {}

    def halt(self):
        if self.machine is None:
            return
        logger.message("Cleaning-up…", end=" ", timed=True)
        self.machine.halt()
        logger.message()
