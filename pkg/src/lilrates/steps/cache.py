from __future__ import annotations

import pathlib
from typing import Any

import yaml
from humanfriendly import format_size, format_timespan
from typeguard import TypeCheckError

from lilrates.cache.manager import CacheManager
from lilrates.cache.policy import Policy
from lilrates.constants import ExitCode, logger
from lilrates.steps import Step

POLICY_FILE = "policy.yaml"


def describe_policy(policy: Policy) -> str:
    limits = []
    if policy.max_size:
        limits.append(f"max {format_size(policy.max_size_bytes, binary=True)}")
    if policy.max_age:
        limits.append(f"max {format_timespan(policy.max_age_seconds)} old")
    if policy.max_num:
        limits.append(f"max {policy.max_num} results")
    return f"{', '.join(limits) or 'unbounded'} ; evicting {policy.eviction} first"


def load_policy(cache_dir: pathlib.Path) -> Policy | None:
    """Policy of cache_dir, None if it has no policy file"""
    fpath = cache_dir / POLICY_FILE
    if not fpath.exists():
        return None
    return Policy.read_from(fpath.read_text(encoding="utf-8"))


class CheckCache(Step):
    _name = "Checking Cache Policy…"

    def run(self, payload: dict[str, Any]) -> int:
        cache_dir = payload["options"].cache_dir
        if not cache_dir:
            logger.add_task("Not using cache ; simulations always run")
            payload["cache"] = CacheManager(pathlib.Path(), Policy.disabled())
            return ExitCode.success

        logger.start_task(f"Reading {cache_dir / POLICY_FILE}")
        try:
            policy = load_policy(cache_dir)
        except (OSError, ValueError, TypeError, TypeCheckError, yaml.YAMLError) as exc:
            logger.fail_task(f"Invalid cache policy: {exc}")
            return ExitCode.config
        if policy is None:
            policy = Policy.defaults()
            logger.succeed_task(f"absent, defaults: {describe_policy(policy)}")
        else:
            logger.succeed_task(describe_policy(policy))

        logger.start_task(f"Listing cached results in {cache_dir}")
        try:
            cache = payload["cache"] = CacheManager(cache_dir, policy)
            cache.walk()
        except OSError as exc:
            logger.fail_task(f"Failed to initialize cache: {exc}")
            return ExitCode.io
        logger.succeed_task(
            f"{len(cache)} results, {format_size(cache.size, binary=True)}"
        )
        return ExitCode.success


class PrintingCache(Step):
    _name = "Printing Cache Content…"

    def run(self, payload: dict[str, Any]) -> int:
        payload["cache"].print(with_evictions=True)
        return ExitCode.success


class ApplyCachePolicy(Step):
    _name = "Enforcing Cache Policy…"

    def run(self, payload: dict[str, Any]) -> int:
        evictions = payload["cache"].apply()
        if not evictions:
            logger.add_task("Cache within policy")
            return ExitCode.success

        freed = 0
        for entry, reason, succeeded in evictions:
            logger.start_task(f"Evicting {entry.source}")
            if succeeded:
                freed += entry.size
                logger.succeed_task(reason)
            else:
                logger.fail_task(f"kept: {reason}")
        logger.add_task(
            f"Evicted {sum(ok for *_, ok in evictions)}/{len(evictions)}",
            f"{format_size(freed, binary=True)} freed",
        )
        return ExitCode.success
