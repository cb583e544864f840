from __future__ import annotations

import csv
import json
import pathlib

import pytest

from lilrates.constants import SEED_ENV
from lilrates.lab.distributions import Normal, Rademacher
from lilrates.limits import Regime, WeightExponents
from lilrates.series import SeriesSpec


@pytest.fixture
def thm1_spec() -> SeriesSpec:
    return SeriesSpec(Regime.thm1)


@pytest.fixture
def thm2_spec() -> SeriesSpec:
    return SeriesSpec(Regime.thm2, WeightExponents(a=0.0, b=0.0))


@pytest.fixture
def normal() -> Normal:
    return Normal()


@pytest.fixture
def rademacher() -> Rademacher:
    return Rademacher()


@pytest.fixture(autouse=True)
def no_seed_env(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)


@pytest.fixture
def read_outputs():
    """(csv rows as dicts, json sidecar) for an --output base path"""

    def reader(base: pathlib.Path) -> tuple[list[dict[str, str]], dict]:
        with open(base.with_suffix(".csv"), newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        sidecar = json.loads(base.with_suffix(".json").read_text(encoding="utf-8"))
        return rows, sidecar

    return reader
