""" Cache policy, read from CACHE_DIR/policy.yaml

    max_size: bytes or a human size (`500MiB`)
    max_age: seconds or a human timespan (`4w`)
    max_num: number of cached results
    eviction: which entries go first once a limit is reached

    A zero limit means no limit."""

from __future__ import annotations

import datetime
import enum
from collections.abc import Callable
from dataclasses import dataclass, fields

import humanfriendly
from typeguard import typechecked

try:
    from yaml import CSafeLoader as SafeLoader
    from yaml import load as yaml_load
except ImportError:
    # we don't NEED cython ext but it's faster so use it if avail.
    from yaml import SafeLoader
    from yaml import load as yaml_load

DEFAULT_MAX_SIZE = "1GiB"


class Eviction(enum.StrEnum):
    oldest = "oldest"
    newest = "newest"
    largest = "largest"
    smallest = "smallest"
    lru = "lru"

    @property
    def keep_order(self) -> tuple[str, bool]:
        """(entry attribute, reverse) sorting entries to keep first"""
        return {
            Eviction.oldest: ("added_on", True),
            Eviction.newest: ("added_on", False),
            Eviction.largest: ("size", False),
            Eviction.smallest: ("size", True),
            Eviction.lru: ("last_used_on", True),
        }[self]


def _parse_limit(
    name: str, value: int | float | str | None, parser: Callable[[str], float]
) -> float | None:
    if value is None or value == 0:
        return None
    if isinstance(value, int | float):
        if value < 0:
            raise ValueError(f"Invalid negative value `{value}` for Policy.{name}")
        return value
    try:
        return parser(value)
    except (humanfriendly.InvalidSize, humanfriendly.InvalidTimespan) as exc:
        raise ValueError(
            f"Unable to parse `{value}` for Policy.{name} ({exc})"
        ) from exc


@typechecked
@dataclass(kw_only=True)
class Policy:
    max_size: int | str | None = None
    max_age: int | float | str | None = None
    max_num: int | None = None
    eviction: str = Eviction.lru.value
    enabled: bool = True

    def __post_init__(self):
        if self.eviction not in set(Eviction):
            raise ValueError(
                f"Unexpected value `{self.eviction}` for Policy.eviction. "
                f"Accepts: {', '.join(Eviction)}"
            )
        size = _parse_limit(
            "max_size",
            self.max_size,
            lambda text: humanfriendly.parse_size(text, binary=True),
        )
        self.max_size = None if size is None else int(size)
        self.max_age = _parse_limit(
            "max_age", self.max_age, humanfriendly.parse_timespan
        )
        if self.max_num is not None and self.max_num < 0:
            raise ValueError(f"Invalid negative value `{self.max_num}` for max_num")

    @property
    def max_size_bytes(self) -> int:
        return int(self.max_size or 0)

    @property
    def max_age_seconds(self) -> float:
        return float(self.max_age or 0)

    @property
    def max_age_dt(self) -> datetime.datetime | None:
        """entries added before this are expired"""
        if not self.max_age:
            return None
        return datetime.datetime.now(tz=datetime.UTC) - datetime.timedelta(
            seconds=self.max_age_seconds
        )

    @classmethod
    def defaults(cls):
        return cls(max_size=DEFAULT_MAX_SIZE)

    @classmethod
    def disabled(cls):
        return cls(enabled=False)

    @classmethod
    def read_from(cls, text: str):
        """Policy from the YAML text of policy.yaml"""
        payload = yaml_load(text, Loader=SafeLoader) or {}
        if not isinstance(payload, dict):
            raise ValueError(f"Policy must be a mapping, not {type(payload).__name__}")
        unknown = set(payload) - {fld.name for fld in fields(cls)}
        if unknown:
            raise ValueError(f"Unknown Policy field(s): {', '.join(sorted(unknown))}")
        return cls(**payload)
