""" Run configurations of the lilrates subcommands

    Values come from an optional YAML file (top-level mapping, or a mapping
    under the subcommand's name) and are overridden by command-line flags.
    validate() checks every field before anything gets computed and raises
    ConfigError naming the field."""

from __future__ import annotations

import dataclasses
import math
import typing
from dataclasses import dataclass
from typing import Any, ClassVar

from typeguard import TypeCheckError, check_type, typechecked

from lilrates.errors import ConfigError, DomainError
from lilrates.lab.distributions import DistKind, Distribution, build_distribution
from lilrates.lab.truncation import TruncationParams
from lilrates.lab.walks import MIN_TAIL_PATHS
from lilrates.limits import Regime, Statistic, WeightExponents, critical_epsilon
from lilrates.series import (
    DriftKind,
    DriftSchedule,
    SeriesSpec,
    TailModel,
    default_grid,
)

try:
    from yaml import CSafeLoader as SafeLoader
    from yaml import load as yaml_load
except ImportError:
    # we don't NEED cython ext but it's faster so use it if avail.
    from yaml import SafeLoader
    from yaml import load as yaml_load


def _choice(field: str, value: str, choices: typing.Iterable[str]):
    choices = tuple(choices)
    if value not in choices:
        raise ConfigError(field, f"must be one of {', '.join(choices)} (got {value!r})")


def _positive(field: str, value: float | int):
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(field, f"must be positive (got {value})")


@typechecked
@dataclass(kw_only=True)
class RunConfig:
    command: ClassVar[str] = ""

    @classmethod
    def field_names(cls) -> list[str]:
        return [fld.name for fld in dataclasses.fields(cls)]

    @classmethod
    def read_from(cls, params: dict[str, Any], text: str | None = None):
        """Config from YAML text (defaults) and CLI params (overrides)

        params entries set to None are flags that were not passed"""
        values: dict[str, Any] = {}
        if text:
            payload = yaml_load(text, Loader=SafeLoader) or {}
            if not isinstance(payload, dict):
                raise ConfigError("config", "YAML config must be a mapping")
            if isinstance(payload.get(cls.command), dict):
                payload = payload[cls.command]
            for key, value in payload.items():
                name = str(key).replace("-", "_")
                if name not in cls.field_names():
                    raise ConfigError(name, f"unknown field for {cls.command}")
                values[name] = value

        values.update(
            {
                key: value
                for key, value in params.items()
                if value is not None and key in cls.field_names()
            }
        )

        hints = typing.get_type_hints(cls)
        for name, value in list(values.items()):
            hint = hints[name]
            if isinstance(value, str) and hint in (float, float | None):
                # YAML 1.1 reads 1e-8 as a string
                try:
                    value = values[name] = float(value)
                except ValueError as exc:
                    raise ConfigError(name, f"not a number: {value!r}") from exc
            try:
                check_type(value, hint)
            except TypeCheckError as exc:
                raise ConfigError(name, str(exc)) from exc
        return cls(**values)

    def validate(self):
        """raise ConfigError on the first invalid field"""

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass(kw_only=True)
class SeriesParams:
    regime: str = "thm1"
    a: float = 0.0
    b: float = 0.0
    tau: float = 0.0

    @property
    def regime_(self) -> Regime:
        return Regime(self.regime)

    @property
    def weights(self) -> WeightExponents:
        return WeightExponents(a=float(self.a), b=float(self.b))

    def check_weights(self):
        _choice("regime", self.regime, (regime.value for regime in Regime))
        for name in ("a", "b", "tau"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(name, "must be finite")
        if self.regime_ == Regime.thm1:
            if self.a <= -1:
                raise ConfigError("a", f"thm1 requires a > -1 (got {self.a})")
            if self.b <= -0.5:
                raise ConfigError("b", f"thm1 requires b > -1/2 (got {self.b})")
        elif self.b <= -1:
            raise ConfigError("b", f"thm2 requires b > -1 (got {self.b})")


@dataclass(kw_only=True)
class DistParams:
    dist: str = "normal"
    sigma: float = 1.0
    half_width: float = 1.0
    alpha: float = 3.0

    def check_dist(self):
        _choice("dist", self.dist, (kind.value for kind in DistKind))
        _positive("sigma", self.sigma)
        _positive("half_width", self.half_width)
        if not (math.isfinite(self.alpha) and self.alpha >= 2):
            raise ConfigError("alpha", f"pareto needs alpha >= 2 (got {self.alpha})")

    def distribution(self) -> Distribution:
        return build_distribution(
            self.dist,
            sigma=float(self.sigma),
            half_width=float(self.half_width),
            alpha=float(self.alpha),
        )


@typechecked
@dataclass(kw_only=True)
class ConstantsConfig(SeriesParams, RunConfig):
    command: ClassVar[str] = "constants"
    stat: str = "abs"

    def validate(self):
        self.check_weights()
        _choice("stat", self.stat, ("max", "abs", "both"))

    @property
    def statistics(self) -> list[Statistic]:
        if self.stat == "both":
            return [Statistic.max, Statistic.abs]
        return [Statistic(self.stat)]


@typechecked
@dataclass(kw_only=True)
class SweepConfig(SeriesParams, RunConfig):
    command: ClassVar[str] = "sweep"
    drift: str = "zero"
    model: str = "abs"
    grid: list[float] | None = None
    tol: float = 1e-8
    splice: int = 1_000_000

    def validate(self):
        self.check_weights()
        _choice("drift", self.drift, (kind.value for kind in DriftKind))
        _choice("model", self.model, ("abs", "sup"))
        if self.drift == DriftKind.zero.value and self.tau != 0:
            raise ConfigError("tau", "zero drift takes no tau (use canonical)")
        _positive("tol", self.tol)
        if self.splice < 16:
            raise ConfigError("splice", f"must be >= 16 (got {self.splice})")

        if self.grid is None:
            self.grid = default_grid(self.regime_, self.weights)
        critical = critical_epsilon(self.regime_, self.weights)
        below = [eps for eps in self.grid if not eps > critical]
        if below:
            raise ConfigError(
                "grid",
                f"epsilon values {below} are not above the critical "
                f"epsilon {critical:g}",
            )
        if len(set(self.grid)) != len(self.grid):
            raise ConfigError("grid", "epsilon values must be distinct")
        self.grid = sorted((float(eps) for eps in self.grid), reverse=True)

    def spec(self) -> SeriesSpec:
        return SeriesSpec(
            regime=self.regime_,
            weights=self.weights,
            drift=DriftSchedule(DriftKind(self.drift), float(self.tau)),
            model=(
                TailModel.sup_wiener()
                if self.model == "sup"
                else TailModel.abs_normal()
            ),
        )


@typechecked
@dataclass(kw_only=True)
class SimulateConfig(DistParams, SeriesParams, RunConfig):
    command: ClassVar[str] = "simulate"
    n: int | None = None
    threshold: float | None = None
    epsilon: float | None = None
    stat: str = "abs"
    paths: int = 10_000

    # empirical series assembly
    series: bool = False
    drift: str = "zero"
    n_min: int = 16
    n_max: int = 1 << 20
    ratio: float = 2.0
    grid_tol: float = 0.05

    def validate(self):
        self.check_dist()
        _choice("stat", self.stat, ("max", "abs"))
        if self.series:
            self.validate_series()
            return
        if self.n is None or self.n < 1:
            raise ConfigError("n", f"walk length must be >= 1 (got {self.n})")
        if (self.threshold is None) == (self.epsilon is None):
            raise ConfigError("threshold", "give exactly one of threshold or epsilon")
        if self.threshold is not None and not math.isfinite(self.threshold):
            raise ConfigError("threshold", "must be finite")
        if self.epsilon is not None:
            _positive("epsilon", self.epsilon)
        if self.paths < MIN_TAIL_PATHS:
            raise ConfigError(
                "paths", f"tail estimation needs >= {MIN_TAIL_PATHS} (got {self.paths})"
            )

    def validate_series(self):
        self.check_weights()
        _choice("drift", self.drift, (kind.value for kind in DriftKind))
        if self.drift == DriftKind.zero.value and self.tau != 0:
            raise ConfigError("tau", "zero drift takes no tau (use canonical)")
        if self.epsilon is None:
            raise ConfigError("epsilon", "series assembly needs an epsilon")
        critical = critical_epsilon(self.regime_, self.weights)
        if not self.epsilon > critical:
            raise ConfigError(
                "epsilon",
                f"must be above the critical epsilon {critical:g} "
                f"(got {self.epsilon})",
            )
        if self.n_min < 1 or self.n_max < self.n_min:
            raise ConfigError(
                "n_max", f"needs 1 <= n_min <= n_max (got {self.n_min}, {self.n_max})"
            )
        if not 1 < self.ratio <= 2:
            raise ConfigError("ratio", f"must lie in (1, 2] (got {self.ratio})")
        if self.paths < 1:
            raise ConfigError("paths", f"must be >= 1 (got {self.paths})")
        _positive("grid_tol", self.grid_tol)
        if not math.isfinite(self.distribution().sigma):
            raise ConfigError("alpha", "series assembly needs a finite variance")

    @property
    def statistic(self) -> Statistic:
        return Statistic(self.stat)

    def spec(self) -> SeriesSpec:
        return SeriesSpec(
            regime=self.regime_,
            weights=self.weights,
            drift=DriftSchedule(DriftKind(self.drift), float(self.tau)),
            sigma=self.distribution().sigma,
            model=(
                TailModel.sup_wiener()
                if self.statistic == Statistic.max
                else TailModel.abs_normal()
            ),
        )


@typechecked
@dataclass(kw_only=True)
class TruncationConfig(DistParams, RunConfig):
    command: ClassVar[str] = "truncation"
    p: float = 1.0
    n: int | None = None
    paths: int = 1000
    epsilon: float | None = None
    tau: float = 0.0

    def validate(self):
        self.check_dist()
        try:
            TruncationParams(float(self.p))
        except DomainError as exc:
            raise ConfigError("p", str(exc)) from exc
        if self.n is None or self.n < 1:
            raise ConfigError("n", f"must be >= 1 (got {self.n})")
        if self.paths < 0:
            raise ConfigError("paths", f"must be non-negative (got {self.paths})")
        if self.epsilon is not None:
            _positive("epsilon", self.epsilon)
        if not math.isfinite(self.tau):
            raise ConfigError("tau", "must be finite")

    @property
    def params(self) -> TruncationParams:
        return TruncationParams(float(self.p))


@typechecked
@dataclass(kw_only=True)
class MomentsConfig(DistParams, RunConfig):
    command: ClassVar[str] = "moments"
    a: float = 0.0
    b: float = 0.0
    t_max: float = 1e8
    t_points: int = 71

    def validate(self):
        self.check_dist()
        for name in ("a", "b"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(name, "must be finite")
        if not (math.isfinite(self.t_max) and self.t_max > 10):
            raise ConfigError("t_max", f"must be finite and > 10 (got {self.t_max})")
        if self.t_points < 2:
            raise ConfigError("t_points", f"must be >= 2 (got {self.t_points})")

    @property
    def weights(self) -> WeightExponents:
        return WeightExponents(a=float(self.a), b=float(self.b))


CONFIGS: dict[str, type[RunConfig]] = {
    cls.command: cls
    for cls in (
        ConstantsConfig,
        SweepConfig,
        SimulateConfig,
        TruncationConfig,
        MomentsConfig,
    )
}


def build_config(
    command: str, params: dict[str, Any], text: str | None = None
) -> RunConfig:
    """validated RunConfig for command"""
    if command not in CONFIGS:
        raise ConfigError("command", f"unknown subcommand {command!r}")
    config = CONFIGS[command].read_from(params, text)
    config.validate()
    return config
