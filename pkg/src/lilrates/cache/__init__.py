from __future__ import annotations

from lilrates.cache.manager import CacheEntry, CacheManager, key_for
from lilrates.cache.policy import Eviction, Policy

__all__ = ["CacheEntry", "CacheManager", "Eviction", "Policy", "key_for"]
