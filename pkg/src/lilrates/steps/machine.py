from __future__ import annotations

from typing import ClassVar

from lilrates.constants import logger
from lilrates.logger import Status
from lilrates.steps import GivingFeedback, Step, VirtualInitStep
from lilrates.steps.analytic import ComputingConstants, RunningSweep
from lilrates.steps.cache import ApplyCachePolicy, CheckCache, PrintingCache
from lilrates.steps.check_inputs import CheckInputs
from lilrates.steps.lab import CheckingMoments, RunningTruncation, Simulating
from lilrates.steps.output import PrintingResults, WritingResults

# the computing step of each subcommand
COMPUTE_STEPS: dict[str, type[Step]] = {
    "constants": ComputingConstants,
    "sweep": RunningSweep,
    "simulate": Simulating,
    "truncation": RunningTruncation,
    "moments": CheckingMoments,
}


class StepMachine:
    """Ordered list of Steps for one subcommand"""

    steps: ClassVar[list[type[Step]]] = [
        VirtualInitStep,
        CheckInputs,
        CheckCache,
        PrintingCache,
        ApplyCachePolicy,
        # replaced by the subcommand's step
        Step,
        PrintingResults,
        WritingResults,
        GivingFeedback,
    ]

    def __init__(self, command: str, **kwargs):
        self.steps = [
            COMPUTE_STEPS[command] if stepcls is Step else stepcls
            for stepcls in type(self).steps
        ]
        self.payload = dict(**kwargs)
        self._current = 0
        self.step = self._get_step(self._current)

    def remove_step(self, step: str):
        """drop that step from the StepMachine"""
        stepcls = next(stepcls for stepcls in self.steps if stepcls.__name__ == step)
        self.steps.remove(stepcls)

    def _get_step(self, index: int):
        return self.steps[index].__call__()

    def __iter__(self):
        return self

    def __next__(self):
        try:
            new_index = self._current + 1
            self.steps[new_index]
        except IndexError as exc:
            raise StopIteration() from exc

        try:
            self.step = self._get_step(new_index)
        except Exception as exc:
            logger.error(f"failed to init step {self.steps[new_index]}: {exc}")
            logger.exception(exc)
            raise StopIteration() from exc
        self._current = new_index
        return self.step

    def halt(self):
        """request cleanup of ran-steps, in reverse order"""
        for index in range(self._current, 0, -1):
            step = self._get_step(index)
            try:
                step.cleanup(payload=self.payload)
            except Exception:
                logger.add_dot(status=Status.NOK)
            else:
                logger.add_dot(status=Status.OK)
