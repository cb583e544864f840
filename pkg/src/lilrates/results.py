""" Result envelopes: a CSV payload table plus a JSON sidecar

    The CSV holds the payload only, so identical configs and seeds give
    byte-identical CSV files ; the sidecar adds the tool version, the resolved
    config, the seed and its origin, a UTC timestamp and a summary."""

from __future__ import annotations

import csv
import datetime
import io
import json
import math
import pathlib
from dataclasses import dataclass, field
from typing import Any

from lilrates import __version__


def utcnow_iso() -> str:
    return (
        datetime.datetime.now(tz=datetime.UTC)
        .replace(microsecond=0)
        .isoformat()
        .replace("+00:00", "Z")
    )


def format_value(value: Any, digits: int | None = None) -> str:
    """CSV cell ; floats are shortest round-trip unless digits is set"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return f"{value:.{digits}g}" if digits else repr(value)
    return str(value)


def json_safe(value: Any) -> Any:
    """non-finite floats become null (strict JSON)"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(key): json_safe(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [json_safe(item) for item in value]
    return value


@dataclass(kw_only=True)
class ResultEnvelope:
    command: str
    config: dict[str, Any]
    seed: int
    seed_source: str
    columns: list[str]
    rows: list[dict[str, Any]]
    summary: dict[str, Any] = field(default_factory=dict)
    # significant digits of float cells (None: shortest round-trip)
    digits: int | None = None
    version: str = __version__
    timestamp: str = field(default_factory=utcnow_iso)

    def cells(self) -> list[list[str]]:
        return [
            [format_value(row.get(column), self.digits) for column in self.columns]
            for row in self.rows
        ]

    def payload_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.cells())
        return buffer.getvalue()

    def to_dict(self) -> dict[str, Any]:
        return json_safe(
            {
                "version": self.version,
                "command": self.command,
                "config": self.config,
                "seed": self.seed,
                "seed_source": self.seed_source,
                "timestamp": self.timestamp,
                "summary": self.summary,
                "columns": self.columns,
                "payload": self.rows,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)

    def write(
        self, csv_path: pathlib.Path, json_path: pathlib.Path
    ) -> tuple[pathlib.Path, pathlib.Path]:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        csv_path.write_text(self.payload_csv(), encoding="utf-8", newline="")
        json_path.write_text(self.to_json() + "\n", encoding="utf-8")
        return csv_path, json_path

    @classmethod
    def read(cls, json_path: pathlib.Path) -> ResultEnvelope:
        data = json.loads(json_path.read_text(encoding="utf-8"))
        return cls(
            command=data["command"],
            config=data["config"],
            seed=data["seed"],
            seed_source=data["seed_source"],
            columns=data["columns"],
            rows=data["payload"],
            summary=data.get("summary", {}),
            version=data["version"],
            timestamp=data["timestamp"],
        )
