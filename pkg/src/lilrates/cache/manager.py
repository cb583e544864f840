""" Content-addressed store of Monte Carlo results

    Every entry is a JSON file at results/<h[:2]>/<h>.json where h is the
    sha256 of the canonical JSON of the resolved parameters. The file holds
    the parameters, the stored payload and the usage metadata."""

from __future__ import annotations

import datetime
import hashlib
import json
import pathlib
from collections.abc import Iterable
from typing import Any

from humanfriendly import format_size, format_timespan

from lilrates.cache.policy import Eviction, Policy
from lilrates.constants import logger

RESULTS_DIR = "results"


def canonical_json(params: dict[str, Any]) -> str:
    return json.dumps(params, sort_keys=True, separators=(",", ":"), allow_nan=False)


def key_for(params: dict[str, Any]) -> str:
    return hashlib.sha256(canonical_json(params).encode("utf-8")).hexdigest()


def path_for(key: str) -> pathlib.Path:
    """cache-relative path for a key"""
    return pathlib.Path(RESULTS_DIR).joinpath(key[:2]).joinpath(f"{key}.json")


def utcnow() -> datetime.datetime:
    return datetime.datetime.now(tz=datetime.UTC)


def format_dt(value: datetime.datetime) -> str:
    return value.strftime("%Y-%m-%d %H:%M:%S")


def sort_for(eviction: str, iterable: Iterable):
    """entries in keeping order: the first ones survive the limits"""
    key, reverse = Eviction(eviction).keep_order
    return sorted(iterable, key=lambda item: getattr(item, key), reverse=reverse)


class CacheEntry:
    def __init__(self, fpath: pathlib.Path):
        self.fpath = fpath
        self.size = fpath.stat().st_size
        document = json.loads(fpath.read_text(encoding="utf-8"))
        metadata = document["meta"]
        self.key = fpath.stem
        self.kind = metadata["kind"]
        self.added_on = datetime.datetime.fromisoformat(metadata["added_on"])
        self.last_used_on = datetime.datetime.fromisoformat(metadata["last_used_on"])
        self.nb_used = int(metadata["nb_used"])
        self.params: dict[str, Any] = document["params"]

    def __repr__(self):
        return f"{type(self).__name__}(key={self.key[:12]}, kind={self.kind})"

    @property
    def payload(self) -> dict[str, Any]:
        return json.loads(self.fpath.read_text(encoding="utf-8"))["payload"]

    @property
    def source(self) -> str:
        """short human description of the cached computation"""
        fields = ("dist", "n", "threshold", "statistic", "paths", "seed")
        return f"{self.kind}:" + ",".join(
            f"{name}={self.params[name]}" for name in fields if name in self.params
        )

    def mark_usage(self, num: int = 1):
        self.nb_used += num
        self.last_used_on = utcnow()
        document = json.loads(self.fpath.read_text(encoding="utf-8"))
        document["meta"]["nb_used"] = self.nb_used
        document["meta"]["last_used_on"] = self.last_used_on.isoformat()
        self.fpath.write_text(json.dumps(document), encoding="utf-8")
        self.size = self.fpath.stat().st_size


def get_eviction_for(
    entries: list[CacheEntry], policy: Policy
) -> list[tuple[CacheEntry, str]]:
    """list of (entry, reason) from entries that are expired or over limits"""
    if not policy.enabled:
        return []

    evictions = []
    total_num = 0
    total_size = 0

    for entry in sort_for(policy.eviction, entries):
        if policy.max_age_dt and entry.added_on < policy.max_age_dt:
            evictions.append(
                (
                    entry,
                    f"Too old for max_age ({format_timespan(policy.max_age_seconds)})",
                )
            )
            continue

        if policy.max_size and total_size + entry.size > policy.max_size_bytes:
            evictions.append(
                (
                    entry,
                    "Would exceed max_size "
                    f"({format_size(policy.max_size_bytes, binary=True)})",
                )
            )
            continue

        if policy.max_num and total_num + 1 > policy.max_num:
            evictions.append((entry, f"Would exceed max_num ({policy.max_num})"))
            continue

        total_size += entry.size
        total_num += 1

    return evictions


class CacheManager(dict):
    def __init__(self, root: pathlib.Path, policy: Policy):
        # cache_dir
        if policy.enabled:
            root.mkdir(parents=True, exist_ok=True)
        self.root = root

        # policy reference
        self.policy: Policy = policy

        # cached (ahah) list of entries seen in the cache
        self.entries: dict[pathlib.Path, CacheEntry] = {}
        # whether cache_dir has been walked-through or not
        self.discovered = False
        # whether cache eviction have been applied or not
        self.applied = False

    def walk(self):
        """walk through filesystem to discover cache content"""
        if not self.policy.enabled:
            return

        entries = {}
        for fpath in self.root.joinpath(RESULTS_DIR).rglob("*.json"):
            if not fpath.is_file():
                continue
            try:
                entries[fpath.relative_to(self.root)] = CacheEntry(fpath)
            except (OSError, ValueError, KeyError) as exc:
                logger.debug(f"Ignoring unreadable cache file {fpath}: {exc}")
        self.entries = entries
        self.discovered = True

    @property
    def size(self) -> int:
        """total size of cache"""
        if not self.discovered:
            self.walk()
        return sum([entry.size for entry in self.entries.values()])

    def get(self, params: dict[str, Any]) -> dict[str, Any] | None:
        """stored payload for params (marking usage) or None"""
        if not self.policy.enabled:
            return None
        if not self.discovered:
            self.walk()
        entry = self.entries.get(path_for(key_for(params)))
        if entry is None:
            return None
        if entry.params != json.loads(canonical_json(params)):
            logger.debug(f"Hash collision or stale entry at {entry.fpath}")
            return None
        entry.mark_usage()
        logger.debug(f"Cache hit {entry.key[:12]} ({entry.source})")
        return entry.payload

    def in_cache(self, params: dict[str, Any]) -> bool:
        if not self.policy.enabled:
            return False
        if not self.discovered:
            self.walk()
        return path_for(key_for(params)) in self.entries

    __contains__ = in_cache  # type: ignore

    def __len__(self):
        if not self.discovered:
            self.walk()
        return len(self.entries)

    def __iter__(self):
        return iter(list(self.entries.values()))

    def introduce(self, kind: str, params: dict[str, Any], payload: dict) -> bool:
        """whether the result was successfuly stored in cache"""
        if not self.policy.enabled:
            return False
        if not self.discovered:
            self.walk()

        relpath = path_for(key_for(params))
        fpath = self.root.joinpath(relpath)
        now = utcnow().isoformat()
        document = {
            "meta": {
                "kind": kind,
                "added_on": now,
                "last_used_on": now,
                "nb_used": 1,
            },
            "params": json.loads(canonical_json(params)),
            "payload": payload,
        }
        try:
            fpath.parent.mkdir(parents=True, exist_ok=True)
            fpath.write_text(json.dumps(document), encoding="utf-8")
            self.entries[relpath] = CacheEntry(fpath)
        except (OSError, ValueError) as exc:
            logger.exception(exc)
            fpath.unlink(missing_ok=True)
            return False

        self.apply()
        return relpath in self.entries

    def evict(self, entry: CacheEntry, reason: str) -> bool:
        """whether entry was successfuly evicted from cache"""
        if not self.policy.enabled:
            return False

        logger.debug(f"Evicting {entry}: {reason}")

        try:
            entry.fpath.unlink()
        except OSError as exc:
            logger.exception(exc)
            return False

        del self.entries[entry.fpath.relative_to(self.root)]
        return True

    def dry_apply(self) -> list[tuple[CacheEntry, str]]:
        """list of (entry, reason) entries from cache that needs eviction"""
        if not self.discovered:
            self.walk()
        return get_eviction_for(list(self.entries.values()), self.policy)

    def apply(self) -> list[tuple[CacheEntry, str, bool]]:
        """(entry, reason, success) list of evictions for applying policy"""
        if not self.policy.enabled:
            return []

        evicted = []
        for entry, reason in self.dry_apply():
            evicted.append((entry, reason, self.evict(entry, reason)))

        self.applied = True
        return evicted

    def print(self, *, with_evictions: bool = False):
        """print content of cache"""
        if not self.discovered:
            self.walk()

        logger.message("")

        if not self.entries:
            logger.message("Cache is empty.")
        else:
            sorted_e = sorted(self.entries.values(), key=lambda e: e.added_on)
            oldest, newest = sorted_e[0], sorted_e[-1]

            logger.table(
                headers=["Size", "Entries", "Oldest", "Newest"],
                data=[
                    [
                        (format_size(self.size, binary=True),),
                        (str(len(self)),),
                        (format_dt(oldest.added_on),),
                        (format_dt(newest.added_on),),
                    ],
                ],
            )
            logger.message("")

            evictions = [e for e, _ in self.dry_apply()] if with_evictions else []

            def style_for(entry: CacheEntry):
                if not with_evictions or entry not in evictions:
                    return logger.ui.reset
                return logger.ui.red

            logger.table(
                headers=["Size", "Added On", "Nb. Used", "Last Used", "Source", "Key"],
                data=[
                    [
                        (style_for(entry), format_size(entry.size, binary=True)),
                        (style_for(entry), format_dt(entry.added_on)),
                        (style_for(entry), str(entry.nb_used)),
                        (style_for(entry), format_dt(entry.last_used_on)),
                        (style_for(entry), entry.source),
                        (style_for(entry), entry.key[:12]),
                    ]
                    for entry in sorted_e
                ],
            )
        logger.message("")
