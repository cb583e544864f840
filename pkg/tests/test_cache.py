from __future__ import annotations

import json

import pytest

from lilrates.cache import CacheManager, Policy
from lilrates.cache.manager import canonical_json, key_for, path_for

PARAMS = {"dist": "normal", "n": 200, "threshold": 21.2, "paths": 1000, "seed": 0}
PAYLOAD = {"p_hat": 0.1336, "std_err": 0.0107, "paths": 1000}


def test_keys_ignore_param_order():
    reordered = dict(reversed(list(PARAMS.items())))
    assert canonical_json(PARAMS) == canonical_json(reordered)
    assert key_for(PARAMS) == key_for(reordered)
    key = key_for(PARAMS)
    assert len(key) == 64
    assert path_for(key).as_posix() == f"results/{key[:2]}/{key}.json"


def test_canonical_json_rejects_nan():
    with pytest.raises(ValueError):
        canonical_json({"threshold": float("nan")})


def test_policy_parsing():
    policy = Policy(max_size="1KiB", max_age="1h", max_num=3)
    assert policy.max_size_bytes == 1024
    assert policy.max_age_seconds == 3600
    assert Policy(max_size=0).max_size is None
    assert Policy.defaults().max_size_bytes == 1 << 30
    assert not Policy.disabled().enabled


@pytest.mark.parametrize(
    "kwargs",
    [{"eviction": "random"}, {"max_num": -1}, {"max_size": -5}, {"max_age": "soon"}],
)
def test_policy_rejects(kwargs):
    with pytest.raises(ValueError):
        Policy(**kwargs)


def test_policy_from_yaml():
    policy = Policy.read_from("max_num: 2\neviction: oldest\n")
    assert policy.max_num == 2
    assert policy.eviction == "oldest"
    assert Policy.read_from("").enabled
    with pytest.raises(ValueError):
        Policy.read_from("max_files: 2\n")
    with pytest.raises(ValueError):
        Policy.read_from("- 1\n")


def test_introduce_then_get(tmp_path):
    cache = CacheManager(tmp_path, Policy.defaults())
    assert cache.get(PARAMS) is None
    assert cache.introduce("tail", PARAMS, PAYLOAD)
    assert PARAMS in cache

    fresh = CacheManager(tmp_path, Policy.defaults())
    assert len(fresh) == 1
    assert fresh.get(PARAMS) == PAYLOAD
    (entry,) = list(fresh)
    assert entry.kind == "tail"
    assert entry.nb_used == 2
    assert entry.source.startswith("tail:dist=normal,n=200")
    document = json.loads(entry.fpath.read_text(encoding="utf-8"))
    assert document["params"] == json.loads(canonical_json(PARAMS))


def test_disabled_cache_stores_nothing(tmp_path):
    cache = CacheManager(tmp_path / "cache", Policy.disabled())
    assert not cache.introduce("tail", PARAMS, PAYLOAD)
    assert cache.get(PARAMS) is None
    assert PARAMS not in cache
    assert not (tmp_path / "cache").exists()


def test_max_num_evicts(tmp_path):
    cache = CacheManager(tmp_path, Policy(max_num=1))
    cache.introduce("tail", PARAMS, PAYLOAD)
    cache.introduce("tail", {**PARAMS, "seed": 1}, PAYLOAD)
    assert len(cache) == 1
    assert len(list(tmp_path.rglob("*.json"))) == 1


@pytest.mark.parametrize("eviction, evicted_seed", [("oldest", 0), ("newest", 1)])
def test_eviction_order(tmp_path, eviction, evicted_seed):
    cache = CacheManager(tmp_path, Policy.defaults())
    for seed in (0, 1):
        cache.introduce("tail", {**PARAMS, "seed": seed}, PAYLOAD)
    fpath = tmp_path / path_for(key_for(PARAMS))
    document = json.loads(fpath.read_text(encoding="utf-8"))
    document["meta"]["added_on"] = "2000-01-01T00:00:00+00:00"
    fpath.write_text(json.dumps(document), encoding="utf-8")

    bounded = CacheManager(tmp_path, Policy(max_num=1, eviction=eviction))
    ((entry, reason),) = bounded.dry_apply()
    assert entry.params["seed"] == evicted_seed
    assert "max_num" in reason


def test_max_age_evicts_old_entries(tmp_path):
    cache = CacheManager(tmp_path, Policy.defaults())
    cache.introduce("tail", PARAMS, PAYLOAD)
    fpath = tmp_path / path_for(key_for(PARAMS))
    document = json.loads(fpath.read_text(encoding="utf-8"))
    document["meta"]["added_on"] = "2000-01-01T00:00:00+00:00"
    fpath.write_text(json.dumps(document), encoding="utf-8")

    aged = CacheManager(tmp_path, Policy(max_age="1d"))
    ((entry, reason),) = aged.dry_apply()
    assert "max_age" in reason
    assert [success for *_, success in aged.apply()] == [True]
    assert not fpath.exists()
    assert entry.key == key_for(PARAMS)


def test_max_size_evicts(tmp_path):
    cache = CacheManager(tmp_path, Policy(max_size=1))
    assert not cache.introduce("tail", PARAMS, PAYLOAD)
    assert len(cache) == 0


def test_unreadable_files_are_ignored(tmp_path):
    junk = tmp_path / "results" / "ab" / "junk.json"
    junk.parent.mkdir(parents=True)
    junk.write_text("{not json", encoding="utf-8")
    cache = CacheManager(tmp_path, Policy.defaults())
    assert len(cache) == 0


def test_print(tmp_path):
    cache = CacheManager(tmp_path, Policy.defaults())
    cache.print()
    cache.introduce("tail", PARAMS, PAYLOAD)
    cache.print(with_evictions=True)
    assert len(cache) == 1
