""" Weighted tail-probability series of the precise-rate LIL

    S(ε) = Σ_{n>=1} w(n)·P(Z >= √(2 loglog n)·(ε + a_n(ε)))

    evaluated as an exact head sum over n <= N₀ plus the integral of the
    summand over [N₀, ∞) written in u = loglog x, with a certified bound on
    the sum-versus-integral difference, the quadrature and the cut-off."""

from __future__ import annotations

import enum
import math
import warnings
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from lilrates.analytic import (
    abs_normal_tail,
    log_abs_normal_tail,
    log_e,
    log_sup_wiener_tail,
    loglog,
    sup_wiener_tail,
)
from lilrates.constants import logger
from lilrates.errors import DivergentParametersError, DomainError, ToleranceNotMetError
from lilrates.limits import (
    Regime,
    Statistic,
    WeightExponents,
    critical_epsilon,
    limit_constant,
)

DEFAULT_SPLICE = 1_000_000
DEFAULT_SPLICE_MAX = 100_000_000
HEAD_CHUNK = 1_000_000
# relative accuracy of the tail functions in the head sum
TAIL_RTOL = 1e-13
MAX_WINDOWS = 10_000
MAX_SPLIT_DEPTH = 8
MONOTONE_GRID = 4001
MONOTONE_U_MAX = 40.0
BREAKDOWN_KEYS = ("head_rounding", "quadrature", "splice", "cutoff")

THM1_GAPS = (0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4)
THM2_EPSILONS = (0.5, 0.2, 0.1, 0.05, 0.02, 0.01)


class DriftKind(enum.Enum):
    zero = "zero"
    canonical = "canonical"
    bounded = "bounded"


@dataclass(frozen=True)
class DriftSchedule:
    """a_n(ε) = value / loglog n

    canonical: value is τ, so a_n(ε)·loglog n = τ for every n
    bounded: value is c, with a_n independent of ε"""

    kind: DriftKind = DriftKind.zero
    value: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError("drift value must be finite")
        if self.kind == DriftKind.zero and self.value != 0.0:
            raise DomainError("zero drift carries no value")

    @classmethod
    def zero(cls) -> DriftSchedule:
        return cls(DriftKind.zero, 0.0)

    @classmethod
    def canonical(cls, tau: float) -> DriftSchedule:
        return cls(DriftKind.canonical, tau)

    @classmethod
    def bounded(cls, c: float) -> DriftSchedule:
        return cls(DriftKind.bounded, c)

    @property
    def tau(self) -> float:
        """limit of a_n(ε)·loglog n"""
        return self.value

    def a_n(self, n, epsilon: float):  # noqa: ARG002 (schedules here ignore ε)
        return self.value / np.asarray(loglog(n))


class TailKind(enum.Enum):
    abs_normal = "abs"
    sup_wiener = "sup"
    empirical = "empirical"


@dataclass(frozen=True)
class EmpiricalTailTable:
    """Empirical tail x ↦ #{samples >= x}/paths of a normalized statistic

    samples are stat/(σ√n) from simulated walks of length n"""

    samples: np.ndarray = field(repr=False)
    statistic: Statistic
    n: int
    paths: int

    def __post_init__(self):
        object.__setattr__(self, "samples", np.sort(np.asarray(self.samples)))

    @property
    def support_max(self) -> float:
        return float(self.samples[-1]) if self.samples.size else 0.0

    def tail(self, x):
        arr = np.asarray(x, dtype=np.float64)
        below = np.searchsorted(self.samples, arr, side="left")
        out = (self.samples.size - below) / max(self.samples.size, 1)
        return float(out) if arr.ndim == 0 else out


@dataclass(frozen=True)
class TailModel:
    kind: TailKind
    table: EmpiricalTailTable | None = None

    def __post_init__(self):
        if (self.kind == TailKind.empirical) != (self.table is not None):
            raise DomainError("an empirical tail table goes with the empirical kind")

    @classmethod
    def abs_normal(cls) -> TailModel:
        return cls(TailKind.abs_normal)

    @classmethod
    def sup_wiener(cls) -> TailModel:
        return cls(TailKind.sup_wiener)

    @classmethod
    def empirical(cls, table: EmpiricalTailTable) -> TailModel:
        return cls(TailKind.empirical, table)

    @property
    def is_analytic(self) -> bool:
        return self.kind != TailKind.empirical

    @property
    def statistic(self) -> Statistic:
        if self.table is not None:
            return self.table.statistic
        return Statistic.max if self.kind == TailKind.sup_wiener else Statistic.abs

    def tail(self, x):
        if self.kind == TailKind.abs_normal:
            return abs_normal_tail(x)
        if self.kind == TailKind.sup_wiener:
            return sup_wiener_tail(np.maximum(x, 0.0), TAIL_RTOL)
        return self.table.tail(x)  # pyright: ignore [reportOptionalMemberAccess]

    def log_tail(self, x):
        if self.kind == TailKind.abs_normal:
            return log_abs_normal_tail(x)
        if self.kind == TailKind.sup_wiener:
            return log_sup_wiener_tail(x, TAIL_RTOL)
        with np.errstate(divide="ignore"):
            return np.log(self.tail(x))


@dataclass(frozen=True)
class SeriesSpec:
    regime: Regime
    weights: WeightExponents = field(default_factory=WeightExponents)
    drift: DriftSchedule = field(default_factory=DriftSchedule)
    sigma: float = 1.0
    model: TailModel = field(default_factory=TailModel.abs_normal)

    def __post_init__(self):
        self.weights.check(self.regime)
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"sigma must be positive (got {self.sigma})")

    @property
    def critical(self) -> float:
        return critical_epsilon(self.regime, self.weights)

    @property
    def growth(self) -> float:
        """exponent of e^u in the integrand once written in u = loglog x"""
        return self.weights.a + 1.0 if self.regime == Regime.thm1 else 0.0

    def decay(self, epsilon: float) -> float:
        """δ: the integrand decays like e^{-δu}"""
        return epsilon**2 - self.growth

    def check_epsilon(self, epsilon: float):
        if not math.isfinite(epsilon) or epsilon <= 0:
            raise DivergentParametersError(f"epsilon must be positive (got {epsilon})")
        if self.decay(epsilon) <= 0:
            raise DivergentParametersError(
                f"series diverges: epsilon^2 <= 1 + a "
                f"(epsilon={epsilon}, a={self.weights.a})"
            )

    @property
    def limit(self) -> float:
        return limit_constant(
            self.regime, self.weights, self.drift.tau, self.model.statistic
        )


@dataclass
class SeriesResult:
    value: float
    head_terms: int
    head_sum: float
    tail_estimate: float
    error_bound: float
    breakdown: dict[str, float] = field(default_factory=dict)
    n_splice: int = 0

    @property
    def relative_error(self) -> float:
        if self.value == 0:
            return 0.0 if self.error_bound == 0 else math.inf
        return self.error_bound / self.value

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "head_terms": self.head_terms,
            "head_sum": self.head_sum,
            "tail_estimate": self.tail_estimate,
            "error_bound": self.error_bound,
            "n_splice": self.n_splice,
            "breakdown": dict(self.breakdown),
        }


def weight(n, spec: SeriesSpec):
    """(log n)^a (loglog n)^b / n for thm1 ; (loglog n)^b / (n log n) for thm2"""
    arr = np.asarray(n, dtype=np.float64)
    if np.any(arr < 1):
        raise DomainError("weight is defined for n >= 1")
    ll = np.asarray(loglog(arr))
    if spec.regime == Regime.thm1:
        out = np.asarray(log_e(arr)) ** spec.weights.a * ll**spec.weights.b / arr
    else:
        out = ll**spec.weights.b / (arr * np.asarray(log_e(arr)))
    return float(out) if arr.ndim == 0 else out


def threshold(n, spec: SeriesSpec, epsilon: float):
    """tail argument √(2 loglog n)·(ε + a_n(ε)) at index n"""
    arr = np.asarray(n, dtype=np.float64)
    ll = np.asarray(loglog(arr))
    out = np.sqrt(2.0 * ll) * (epsilon + spec.drift.value / ll)
    return float(out) if arr.ndim == 0 else out


def _head_sum(spec: SeriesSpec, epsilon: float, start: int, stop: int) -> float:
    """Σ_{start <= n <= stop} summand(n), chunked to bound memory"""
    partials = []
    for lo in range(start, stop + 1, HEAD_CHUNK):
        n = np.arange(lo, min(lo + HEAD_CHUNK, stop + 1), dtype=np.float64)
        terms = weight(n, spec) * spec.model.tail(threshold(n, spec, epsilon))
        partials.append(float(np.sum(terms)))
    return math.fsum(partials)


def _log_integrand(spec: SeriesSpec, epsilon: float) -> Callable:
    """log of the summand measure in u = loglog x (scalar or array u)"""
    growth = spec.growth
    b = spec.weights.b
    v = spec.drift.value

    def func(u):
        x = np.sqrt(2.0 * u) * (epsilon + v / u)
        return growth * u + b * np.log(u) + spec.model.log_tail(x)

    return func


def _integrate_window(
    log_func: Callable, lo: float, hi: float, rtol: float, depth: int = 0
) -> tuple[float, float]:
    """∫_lo^hi exp(log_func): returns (value, error estimate)"""
    mid = (lo + hi) / 2.0
    ref = float(max(log_func(lo), log_func(mid), log_func(hi)))
    if ref < -700:
        # whole window below the double range relative to anything finite
        return 0.0, 0.0

    def scaled(u: float) -> float:
        return math.exp(float(log_func(u)) - ref)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(
            scaled, lo, hi, epsabs=0.0, epsrel=rtol, limit=200, full_output=1
        )
    value, error = res[0], res[1]
    troubled = len(res) > 3 or error > 10 * rtol * abs(value)
    if troubled and depth < MAX_SPLIT_DEPTH:
        left = _integrate_window(log_func, lo, mid, rtol, depth + 1)
        right = _integrate_window(log_func, mid, hi, rtol, depth + 1)
        return left[0] + right[0], left[1] + right[1]
    scale = math.exp(ref)
    return value * scale, error * scale


def _cutoff_bound(spec: SeriesSpec, epsilon: float, upper: float) -> float:
    """Bound on the integral over u >= upper, valid once upper >= 2|v|/ε

    Uses P(Z >= x) <= c·Q(x) <= c·exp(-x²/2)/(x√(2π)) with c = 2 (|N|) or
    4 (sup|W|), which gives integrand <= C·e^{-δu}·u^{b-1/2}."""
    delta = spec.decay(epsilon)
    v = spec.drift.value
    c_tail = 4.0 if spec.model.kind == TailKind.sup_wiener else 2.0
    log_c = (
        math.log(c_tail)
        - 2.0 * epsilon * v
        - math.log(epsilon * math.sqrt(math.pi))
    )
    s = spec.weights.b + 0.5
    if s > 0:
        # ∫_U^∞ e^{-δu} u^{s-1} du = δ^{-s}·Γ(s, δU)
        upper_gamma = float(special.gammaincc(s, delta * upper))
        if upper_gamma <= 0:
            return 0.0
        log_bound = (
            log_c
            - s * math.log(delta)
            + float(special.gammaln(s))
            + math.log(upper_gamma)
        )
    else:
        log_bound = (
            log_c + (s - 1.0) * math.log(upper) - delta * upper - math.log(delta)
        )
    return math.exp(log_bound) if log_bound > -745 else 0.0


def _tail_integral(
    spec: SeriesSpec, epsilon: float, n_splice: int, tol: float, head: float
) -> tuple[float, float, float, float]:
    """∫_{N₀}^∞ summand, returns (integral, quadrature error, cutoff, u_end)"""
    log_func = _log_integrand(spec, epsilon)
    delta = spec.decay(epsilon)
    u_lo = float(loglog(n_splice))
    u_safe = 2.0 * abs(spec.drift.value) / epsilon
    width = max(1.0, 10.0 / delta)

    total, quad_error = 0.0, 0.0
    upper = u_lo
    for _ in range(MAX_WINDOWS):
        value, error = _integrate_window(log_func, upper, upper + width, tol / 100.0)
        total += value
        quad_error += error
        upper += width
        if upper < u_safe:
            continue
        cutoff = _cutoff_bound(spec, epsilon, upper)
        if cutoff <= tol * (head + total) / 10.0:
            return total, quad_error, cutoff, upper
    raise ToleranceNotMetError(
        f"integral cut-off not reached after {MAX_WINDOWS} windows (u={upper})"
    )


def _splice(
    spec: SeriesSpec, epsilon: float, n_splice: int, u_end: float
) -> tuple[float, float]:
    """(correction to add to the integral, bound) for Σ_{n>N₀} versus ∫_{N₀}^∞

    The summand as a function of real x is f(x) = exp(g(u) - u - e^u)."""
    f_splice = float(
        weight(n_splice, spec) * spec.model.tail(threshold(n_splice, spec, epsilon))
    )
    u_lo = float(loglog(n_splice))
    log_func = _log_integrand(spec, epsilon)

    def log_summand(top: float) -> np.ndarray:
        top = max(top, u_lo * 1.0001)
        grid = np.unique(
            np.concatenate(
                [
                    np.linspace(u_lo, top, MONOTONE_GRID),
                    np.geomspace(u_lo, top, MONOTONE_GRID),
                ]
            )
        )
        with np.errstate(over="ignore"):
            return np.asarray(log_func(grid)) - grid - np.exp(grid)

    # past MONOTONE_U_MAX the -e^u term outweighs everything else, provided
    # the threshold keeps increasing there (εu >= v)
    if epsilon * MONOTONE_U_MAX >= spec.drift.value:
        log_f = log_summand(min(u_end, MONOTONE_U_MAX))
        if np.all(np.diff(log_f) <= 0):
            return -f_splice / 2.0, f_splice / 2.0
    logger.debug(f"summand not monotone beyond N0={n_splice}, using variation bound")
    values = np.exp(log_summand(min(u_end, 700.0)))
    variation = float(np.sum(np.abs(np.diff(values))))
    return 0.0, variation + f_splice


def series_remainder(
    spec: SeriesSpec, epsilon: float, n_from: int, tol: float = 1e-6
) -> tuple[float, float]:
    """(estimate, bound) of Σ_{n > n_from} summand(n) for analytic models"""
    spec.check_epsilon(epsilon)
    if not spec.model.is_analytic:
        raise DomainError("remainders are computed for analytic tail models only")
    n_from = max(n_from, 16)
    integral, quad_error, cutoff, u_end = _tail_integral(
        spec, epsilon, n_from, tol, 0.0
    )
    correction, splice_bound = _splice(spec, epsilon, n_from, u_end)
    return max(integral + correction, 0.0), quad_error + cutoff + splice_bound


def _empirical_result(spec: SeriesSpec, epsilon: float, n_splice: int) -> SeriesResult:
    table = spec.model.table
    if table is None:
        raise DomainError("empirical model without a table")
    u_lo = float(loglog(n_splice))
    v = spec.drift.value
    above = float(threshold(n_splice, spec, epsilon)) > table.support_max
    if not (above and epsilon * u_lo >= v):
        raise DomainError(
            "empirical tail is not zero beyond the splice: "
            "use assemble_empirical_series for simulated series"
        )
    head = _head_sum(spec, epsilon, 1, n_splice)
    return SeriesResult(
        value=head,
        head_terms=n_splice,
        head_sum=head,
        tail_estimate=0.0,
        error_bound=0.0,
        breakdown=dict.fromkeys(BREAKDOWN_KEYS, 0.0),
        n_splice=n_splice,
    )


def evaluate_series(
    spec: SeriesSpec,
    epsilon: float,
    tol: float = 1e-8,
    *,
    n_splice: int = DEFAULT_SPLICE,
    n_splice_max: int = DEFAULT_SPLICE_MAX,
) -> SeriesResult:
    """S(ε) with error_bound <= tol·value

    The splice moves ×10 (up to n_splice_max) while the bound is too large;
    ToleranceNotMetError carries the last result otherwise."""
    spec.check_epsilon(epsilon)
    if tol <= 0:
        raise DomainError("tol must be positive")
    if n_splice < 16:
        raise DomainError("n_splice must be at least 16")

    if not spec.model.is_analytic:
        return _empirical_result(spec, epsilon, n_splice)

    head, done = 0.0, 0
    result = None
    while True:
        head += _head_sum(spec, epsilon, done + 1, n_splice)
        done = n_splice

        integral, quad_error, cutoff, u_end = _tail_integral(
            spec, epsilon, n_splice, tol, head
        )
        correction, splice_bound = _splice(spec, epsilon, n_splice, u_end)
        tail_estimate = max(integral + correction, 0.0)
        breakdown = {
            "head_rounding": head * (TAIL_RTOL + 64 * np.finfo(float).eps),
            "quadrature": quad_error,
            "splice": splice_bound,
            "cutoff": cutoff,
        }
        result = SeriesResult(
            value=head + tail_estimate,
            head_terms=n_splice,
            head_sum=head,
            tail_estimate=tail_estimate,
            error_bound=math.fsum(breakdown.values()),
            breakdown=breakdown,
            n_splice=n_splice,
        )
        logger.debug(
            f"S({epsilon:g}) = {result.value:.12g} ± {result.error_bound:.3g} "
            f"(N0={n_splice}, {breakdown})"
        )
        if result.error_bound <= tol * result.value or result.error_bound == 0:
            return result
        if n_splice * 10 > n_splice_max:
            break
        n_splice *= 10

    raise ToleranceNotMetError(
        f"error bound {result.error_bound:.3g} above {tol:g}·{result.value:.6g} "
        f"at N0={result.n_splice}",
        result=result,
    )


def normalizer(spec: SeriesSpec, epsilon: float) -> float:
    """(ε²-1-a)^{b+1/2} for thm1 ; ε^{2(b+1)} for thm2"""
    if spec.regime == Regime.thm1:
        return spec.decay(epsilon) ** (spec.weights.b + 0.5)
    return epsilon ** (2.0 * (spec.weights.b + 1.0))


def normalized_value(spec: SeriesSpec, epsilon: float, tol: float = 1e-8) -> float:
    return normalizer(spec, epsilon) * evaluate_series(spec, epsilon, tol).value


@dataclass
class SweepRow:
    epsilon: float
    series: float
    normalized: float
    limit: float
    ratio: float
    error_bound: float
    failed: bool = False
    message: str = ""

    @property
    def ratio_error(self) -> float:
        """error bound carried over to the ratio column"""
        return self.error_bound * self.ratio / self.series if self.series else 0.0

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "series": self.series,
            "normalized": self.normalized,
            "limit": self.limit,
            "ratio": self.ratio,
            "error_bound": self.error_bound,
        }


def default_grid(regime: Regime, w: WeightExponents) -> list[float]:
    """ε values decreasing toward the critical value, geometric in the gap"""
    if regime == Regime.thm1:
        return [math.sqrt(1.0 + w.a + gap) for gap in THM1_GAPS]
    return list(THM2_EPSILONS)


def _sweep_row(
    spec: SeriesSpec, epsilon: float, tol: float, limit: float, n_splice: int
) -> SweepRow:
    scale = normalizer(spec, epsilon)
    try:
        result = evaluate_series(spec, epsilon, tol, n_splice=n_splice)
    except ToleranceNotMetError as exc:
        partial = exc.result
        if partial is None:
            return SweepRow(
                epsilon, math.nan, math.nan, limit, math.nan, math.inf, True, str(exc)
            )
        return SweepRow(
            epsilon=epsilon,
            series=partial.value,
            normalized=scale * partial.value,
            limit=limit,
            ratio=scale * partial.value / limit,
            error_bound=partial.error_bound,
            failed=True,
            message=str(exc),
        )
    return SweepRow(
        epsilon=epsilon,
        series=result.value,
        normalized=scale * result.value,
        limit=limit,
        ratio=scale * result.value / limit,
        error_bound=result.error_bound,
    )


def epsilon_sweep(
    spec: SeriesSpec,
    grid: Sequence[float],
    tol: float = 1e-8,
    *,
    workers: int = 1,
    n_splice: int = DEFAULT_SPLICE,
) -> list[SweepRow]:
    """One row per ε of grid, in grid order

    Rows are independent and run on `workers` threads ; a row whose bound
    stays above tol comes back marked failed."""
    grid = list(grid)
    if not grid:
        return []
    critical = spec.critical
    if any(eps <= critical for eps in grid):
        raise DivergentParametersError(
            f"sweep grid must stay above the critical epsilon {critical:g}"
        )
    if any(later >= earlier for earlier, later in zip(grid, grid[1:], strict=False)):
        raise DomainError("sweep grid must be decreasing toward the critical epsilon")

    limit = spec.limit

    def row(eps: float) -> SweepRow:
        return _sweep_row(spec, eps, tol, limit, n_splice)

    if workers <= 1:
        return [row(eps) for eps in grid]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(row, grid))
