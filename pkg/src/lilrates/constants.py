from __future__ import annotations

import enum
import logging
import os
import pathlib
import sys
from dataclasses import dataclass, field
from typing import Any

from lilrates import __version__ as vers
from lilrates.errors import ConfigError
from lilrates.logger import Logger

# version of the python interpreter
pyvers = ".".join([str(p) for p in sys.version_info[:3]])
banner: str = rf"""
  _ _ _             _
 | (_) |_ __ __ _| |_ ___  ___
 | | | | '__/ _` | __/ _ \/ __|
 | | | | | | (_| | ||  __/\__ \
 |_|_|_|_|  \__,_|\__\___||___/
                     v{vers}|py{pyvers}

"""

SEED_ENV = "LILRATES_SEED"
COMMANDS = ("constants", "sweep", "simulate", "truncation", "moments")


class ExitCode(enum.IntEnum):
    success = 0
    unexpected = 1
    config = 2
    tolerance = 3
    io = 4


@dataclass(kw_only=True)
class Options:
    """Command-line options common to all subcommands"""

    command: str
    CONFIG: str | None = None
    OUTPUT: str | None = None
    CACHE_DIR: str | None = None

    seed: int | None = None
    workers: int = 1
    show_cache: bool = False
    debug: bool = False

    # subcommand-specific flags, as parsed (None when not given)
    params: dict[str, Any] = field(default_factory=dict)

    config_path: pathlib.Path | None = None
    output_path: pathlib.Path | None = None
    cache_dir: pathlib.Path | None = None
    seed_value: int = field(init=False)
    seed_source: str = field(init=False)

    logger: Logger = field(init=False)

    def __post_init__(self):
        self.logger = self.get_logger()
        if self.debug:
            self.logger.setLevel(logging.DEBUG)

        if self.command not in COMMANDS:
            raise ConfigError("command", f"unknown subcommand {self.command!r}")

        if self.CONFIG:
            self.config_path = pathlib.Path(self.CONFIG).expanduser().resolve()
        if self.OUTPUT:
            self.output_path = pathlib.Path(self.OUTPUT).expanduser().resolve()
            # --output results.csv and --output results are equivalent
            if self.output_path.suffix in (".csv", ".json"):
                self.output_path = self.output_path.with_suffix("")
        if self.CACHE_DIR:
            self.cache_dir = pathlib.Path(self.CACHE_DIR).expanduser().resolve()

        if self.workers < 1:
            raise ConfigError("workers", f"must be >= 1 (got {self.workers})")

        self.seed_value, self.seed_source = self.resolve_seed(self.seed)

    @staticmethod
    def resolve_seed(flag: int | None) -> tuple[int, str]:
        """seed and its origin: --seed flag, then environment, then 0"""
        if flag is not None:
            seed, source = flag, "flag"
        elif os.getenv(SEED_ENV, "").strip():
            try:
                seed, source = int(os.environ[SEED_ENV].strip()), "env"
            except ValueError as exc:
                raise ConfigError(
                    "seed", f"{SEED_ENV} is not an integer: {os.environ[SEED_ENV]!r}"
                ) from exc
        else:
            seed, source = 0, "default"
        if seed < 0:
            raise ConfigError("seed", f"must be non-negative (got {seed})")
        return seed, source

    @property
    def version(self):
        return vers

    @property
    def csv_path(self) -> pathlib.Path | None:
        return self.output_path.with_suffix(".csv") if self.output_path else None

    @property
    def json_path(self) -> pathlib.Path | None:
        return self.output_path.with_suffix(".json") if self.output_path else None

    @classmethod
    def get_logger(cls) -> Logger:
        return _shared_logger()


_logger: Logger | None = None


def _shared_logger() -> Logger:
    global _logger  # noqa: PLW0603
    if _logger is None:
        _logger = Logger()
    return _logger


class _Global:
    _ready: bool = False
    _debug: bool = False
    options: Options

    @property
    def debug(self):
        return Global.options.debug if Global._ready else self._debug

    @property
    def logger(self):
        return Global.options.logger if Global._ready else Options.get_logger()


Global = _Global()
logger = Global.logger
