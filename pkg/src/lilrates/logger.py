""" Terminal output of a run

    A run is a sequence of steps, each made of tasks. A task prints on a
    single line: started, then closed with a check or a cross and an optional
    note. Numerical modules only ever call debug(), shown with --debug."""

from __future__ import annotations

import contextlib
import enum
import logging
import traceback
from collections.abc import Iterator, Sequence
from typing import Any

import cli_ui as ui


class Status(enum.Enum):
    OK = "ok"
    NOK = "nok"
    NEUTRAL = "neutral"


DOT_COLORS: dict[Status, ui.Color] = {
    Status.NEUTRAL: ui.reset,
    Status.OK: ui.green,
    Status.NOK: ui.red,
}


class Position(enum.IntEnum):
    """nesting of the current output, valued as its indentation"""

    top = 0
    step = 3
    task = 6


@contextlib.contextmanager
def timestamped() -> Iterator[None]:
    ui.CONFIG["timestamp"] = True
    try:
        yield
    finally:
        ui.CONFIG["timestamp"] = False


class Logger:
    def __init__(self, level: int = logging.INFO):
        self.position = Position.top
        # a started task leaves its line open for the check/cross
        self.line_open = False
        self.level = level
        self.setLevel(level)

    @property
    def ui(self):
        return ui

    def setLevel(self, level: int):  # noqa: N802 (same API as stdlib loggers)
        self.level = level
        ui.setup(
            verbose=level <= logging.DEBUG,
            quiet=level >= logging.WARNING,
            color="auto",
            title="lilrates",
            timestamp=False,
        )

    @property
    def is_debug(self) -> bool:
        return self.level <= logging.DEBUG

    def _break_line(self):
        if self.line_open:
            ui.info("")
            self.line_open = False

    def _indent(self, text: str) -> str:
        return ui.indent(text, num=int(self.position))

    def message(self, *tokens, end: str = "\n", timed: bool = False):
        self._break_line()
        with timestamped() if timed else contextlib.nullcontext():
            ui.message(" " * int(self.position), *tokens, end=end)

    def debug(self, text: str):
        if not self.is_debug:
            return
        self._break_line()
        ui.debug(self._indent(text))

    def info(self, text: str, end: str = "\n"):
        self._break_line()
        ui.info(self._indent(text), end=end)

    def warning(self, text: str):
        self._break_line()
        ui.message(ui.brown, self._indent(text))

    def error(self, text: str):
        self._break_line()
        ui.message(ui.bold, ui.red, self._indent(text))

    def critical(self, text: str):
        self._break_line()
        ui.error(text)

    def exception(self, exc: BaseException):
        self._break_line()
        ui.message(ui.red, "".join(traceback.format_exception(exc)))

    def table(self, data: Any, headers: str | Sequence[str]):
        self._break_line()
        ui.info_table(data=data, headers=headers)

    def start_step(self, step: str):
        self._break_line()
        self.position = Position.step
        with timestamped():
            ui.info_1(step)

    def end_step(self):
        self._break_line()
        self.position = Position.top

    def start_task(self, task: str):
        self._break_line()
        self.position = Position.task
        with timestamped():
            ui.message("  ", ui.bold, ui.blue, "=>", ui.reset, task, end=" ")
        self.line_open = True

    def end_task(self, *, success: bool | None = None, message: str | None = None):
        tokens: list[Any] = []
        if success is not None:
            tokens.append(ui.check if success else ui.cross)
        if message:
            tokens += [ui.brown, message]
        ui.message(*tokens)
        self.line_open = False
        self.position = Position.step

    def succeed_task(self, message: str | None = None):
        self.end_task(success=True, message=message)

    def fail_task(self, message: str | None = None):
        self.end_task(success=False, message=message)

    def add_task(self, name: str, message: str | None = None):
        """task with no status, started and ended at once"""
        self.start_task(name)
        self.end_task(message=message)

    def add_dot(self, status: Status = Status.NEUTRAL):
        """one colored dot per hidden operation ; caller ends the line"""
        ui.message(DOT_COLORS.get(status, DOT_COLORS[Status.NEUTRAL]), ".", end="")

    def terminate(self):
        self._break_line()
        self.position = Position.top
