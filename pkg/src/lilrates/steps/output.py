from __future__ import annotations

from typing import Any

from lilrates.constants import ExitCode, logger
from lilrates.steps import Step

# rows printed to the terminal ; files always get all of them
MAX_PRINTED_ROWS = 40


class PrintingResults(Step):
    _name = "Printing results…"

    def run(self, payload: dict[str, Any]) -> int:
        envelope = payload["envelope"]
        cells = envelope.cells()
        if len(cells) > MAX_PRINTED_ROWS:
            logger.add_task(f"Showing last {MAX_PRINTED_ROWS} of {len(cells)} rows")
            cells = cells[-MAX_PRINTED_ROWS:]
        logger.table(
            headers=envelope.columns,
            data=[[(cell,) for cell in row] for row in cells],
        )
        logger.message("")
        return ExitCode.success


class WritingResults(Step):
    _name = "Writing results…"

    def run(self, payload: dict[str, Any]) -> int:
        options = payload["options"]
        if not options.output_path:
            logger.add_task("No --output ; nothing written")
            return ExitCode.success

        logger.start_task(f"Writing {options.csv_path.name} and its JSON sidecar")
        try:
            payload["envelope"].write(options.csv_path, options.json_path)
        except OSError as exc:
            logger.fail_task(str(exc))
            return ExitCode.io
        logger.succeed_task(str(options.csv_path.parent))
        return ExitCode.success
