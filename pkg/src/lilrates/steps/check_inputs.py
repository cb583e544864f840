from __future__ import annotations

from typing import Any

from lilrates.config import build_config
from lilrates.constants import ExitCode, logger
from lilrates.errors import ConfigError
from lilrates.steps import Step


class CheckInputs(Step):
    _name = "Checking inputs…"

    def run(self, payload: dict[str, Any]) -> int:
        options = payload["options"]
        text = None
        if options.config_path:
            logger.start_task(f"Reading config at {options.config_path}")
            try:
                text = options.config_path.read_text(encoding="utf-8")
            except OSError as exc:
                logger.fail_task(str(exc))
                return ExitCode.config
            logger.succeed_task()

        logger.start_task(f"Validating {options.command} config")
        try:
            payload["config"] = build_config(options.command, options.params, text)
        except ConfigError as exc:
            logger.fail_task(str(exc))
            return ExitCode.config
        except Exception as exc:
            # YAML syntax errors surface here
            logger.fail_task(f"config: {exc}")
            return ExitCode.config
        logger.succeed_task()

        logger.add_task(
            "Using seed", f"{options.seed_value} (from {options.seed_source})"
        )
        logger.debug(f"Resolved config: {payload['config'].to_dict()}")
        return ExitCode.success
