""" Catalogue of symmetric increment laws with analytic moment metadata

    Samplers draw in unit scale ; `scale` maps unit draws to the law itself so
    that walks of Normal(σ) for different σ share their random event structure.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy import integrate, special

from lilrates.analytic import log_e
from lilrates.errors import DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)


class DistKind(enum.Enum):
    normal = "normal"
    rademacher = "rademacher"
    uniform = "uniform"
    pareto = "pareto"


def _log_weight(x: np.ndarray | float, a: float, b: float):
    """(log x)^a (loglog x)^(b-1) with the ln(x ∨ e) convention"""
    lx = np.asarray(log_e(np.maximum(x, 1e-300)))
    return lx**a * np.asarray(log_e(lx)) ** (b - 1.0)


class Distribution:
    """Symmetric law of X ; mean is always 0"""

    kind: DistKind
    has_block_sums: bool = False

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def scale(self) -> float:
        return 1.0

    @property
    def mean(self) -> float:
        return 0.0

    @property
    def variance(self) -> float:
        raise NotImplementedError()

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)

    @property
    def params(self) -> dict[str, float]:
        return {}

    def describe(self) -> str:
        args = ", ".join(f"{key}={value:g}" for key, value in self.params.items())
        return f"{self.name}({args})"

    def sample_unit(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """unit-scale increments ; X = scale·sample"""
        raise NotImplementedError()

    def sample_block_sums(self, rng: np.random.Generator, sizes: np.ndarray):
        """exact unit-scale sums of `sizes[i]` consecutive increments"""
        raise NotImplementedError()

    def abs_density(self, x: float) -> float:
        """density of |X| (continuous laws)"""
        raise NotImplementedError()

    @property
    def support(self) -> tuple[float, float]:
        """support of |X|"""
        return (0.0, math.inf)

    def tail_probability(self, t: float) -> float:
        """P(|X| >= t)"""
        raise NotImplementedError()

    def tail_second_moment(self, t: float) -> float:
        """E[X²·1{|X| >= t}]"""
        raise NotImplementedError()

    def truncated_second_moment(self, c: float) -> float:
        """E[X²·1{|X| <= c}]"""
        if c < 0:
            return 0.0
        return self.variance - self.tail_second_moment(c)

    def truncated_second_moment_quad(self, c: float) -> float:
        """E[X²·1{|X| <= c}] by quadrature over the density of |X|"""
        lo, hi = self.support
        top = min(c, hi)
        if top <= lo:
            return 0.0
        value, _ = integrate.quad(
            lambda x: x * x * self.abs_density(x),
            lo,
            top,
            epsabs=1e-14,
            epsrel=1e-12,
            limit=200,
        )
        return value

    def is_functional_finite(self, a: float, b: float) -> bool:  # noqa: ARG002
        """E[X²(log|X|)^a(loglog|X|)^(b-1)] < ∞"""
        return True

    def functional(self, a: float, b: float) -> float:
        """E[X²(log|X|)^a(loglog|X|)^(b-1)], inf when divergent"""
        if not self.is_functional_finite(a, b):
            return math.inf
        lo, hi = self.support
        breaks = [pt for pt in (math.e, math.exp(math.e)) if lo < pt < hi]
        edges = [lo, *breaks, hi]
        total = 0.0
        for left, right in zip(edges, edges[1:], strict=False):
            value, _ = integrate.quad(
                lambda x: x * x * float(_log_weight(x, a, b)) * self.abs_density(x),
                left,
                right,
                epsabs=1e-14,
                epsrel=1e-11,
                limit=200,
            )
            total += value
        return total

    def __repr__(self) -> str:
        return self.describe()


class Normal(Distribution):
    kind = DistKind.normal
    has_block_sums = True

    def __init__(self, sigma: float = 1.0):
        if not (math.isfinite(sigma) and sigma > 0):
            raise DomainError(f"normal sigma must be positive (got {sigma})")
        self._sigma = float(sigma)

    @property
    def scale(self) -> float:
        return self._sigma

    @property
    def variance(self) -> float:
        return self._sigma**2

    @property
    def params(self) -> dict[str, float]:
        return {"sigma": self._sigma}

    def sample_unit(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.standard_normal(size)

    def sample_block_sums(self, rng: np.random.Generator, sizes: np.ndarray):
        return rng.standard_normal(len(sizes)) * np.sqrt(sizes)

    def abs_density(self, x: float) -> float:
        z = x / self._sigma
        return 2.0 * math.exp(-z * z / 2.0) / (SQRT_2PI * self._sigma)

    def tail_probability(self, t: float) -> float:
        return 1.0 if t <= 0 else float(2.0 * special.ndtr(-t / self._sigma))

    def tail_second_moment(self, t: float) -> float:
        if t <= 0:
            return self.variance
        z = t / self._sigma
        pdf = math.exp(-z * z / 2.0) / SQRT_2PI
        return 2.0 * self.variance * (z * pdf + float(special.ndtr(-z)))


class Rademacher(Distribution):
    kind = DistKind.rademacher
    has_block_sums = True

    @property
    def variance(self) -> float:
        return 1.0

    @property
    def support(self) -> tuple[float, float]:
        return (1.0, 1.0)

    def sample_unit(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return 2.0 * rng.integers(0, 2, size=size).astype(np.float64) - 1.0

    def sample_block_sums(self, rng: np.random.Generator, sizes: np.ndarray):
        sizes = np.asarray(sizes, dtype=np.int64)
        return 2.0 * rng.binomial(sizes, 0.5).astype(np.float64) - sizes

    def tail_probability(self, t: float) -> float:
        return 1.0 if t <= 1.0 else 0.0

    def tail_second_moment(self, t: float) -> float:
        return 1.0 if t <= 1.0 else 0.0

    def truncated_second_moment(self, c: float) -> float:
        return 1.0 if c >= 1.0 else 0.0

    def truncated_second_moment_quad(self, c: float) -> float:
        # point mass at 1, nothing to integrate
        return self.truncated_second_moment(c)

    def functional(self, a: float, b: float) -> float:  # noqa: ARG002
        # |X| = 1 and log 1 = loglog 1 = 1
        return 1.0


class UniformSym(Distribution):
    kind = DistKind.uniform

    def __init__(self, half_width: float = 1.0):
        if not (math.isfinite(half_width) and half_width > 0):
            raise DomainError(f"uniform half-width must be positive (got {half_width})")
        self.half_width = float(half_width)

    @property
    def scale(self) -> float:
        return self.half_width

    @property
    def variance(self) -> float:
        return self.half_width**2 / 3.0

    @property
    def params(self) -> dict[str, float]:
        return {"half_width": self.half_width}

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, self.half_width)

    def sample_unit(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(-1.0, 1.0, size)

    def abs_density(self, x: float) -> float:
        return 1.0 / self.half_width if 0 <= x <= self.half_width else 0.0

    def tail_probability(self, t: float) -> float:
        if t <= 0:
            return 1.0
        return max(self.half_width - t, 0.0) / self.half_width

    def tail_second_moment(self, t: float) -> float:
        h = self.half_width
        if t <= 0:
            return self.variance
        if t >= h:
            return 0.0
        return (h**3 - t**3) / (3.0 * h)


class TwoSidedPareto(Distribution):
    """P(|X| > t) = t^-α for t >= 1, random sign"""

    kind = DistKind.pareto

    def __init__(self, alpha: float = 3.0):
        if not (math.isfinite(alpha) and alpha >= 2):
            raise DomainError(f"pareto alpha must be >= 2 (got {alpha})")
        self.alpha = float(alpha)

    @property
    def variance(self) -> float:
        if self.alpha == 2:
            return math.inf
        return self.alpha / (self.alpha - 2.0)

    @property
    def params(self) -> dict[str, float]:
        return {"alpha": self.alpha}

    @property
    def support(self) -> tuple[float, float]:
        return (1.0, math.inf)

    def sample_unit(self, rng: np.random.Generator, size: int) -> np.ndarray:
        magnitude = (1.0 - rng.random(size)) ** (-1.0 / self.alpha)
        sign = 2.0 * rng.integers(0, 2, size=size).astype(np.float64) - 1.0
        return sign * magnitude

    def abs_density(self, x: float) -> float:
        return self.alpha * x ** (-self.alpha - 1.0) if x >= 1 else 0.0

    def tail_probability(self, t: float) -> float:
        return 1.0 if t <= 1 else t**-self.alpha

    def tail_second_moment(self, t: float) -> float:
        if self.alpha == 2:
            return math.inf
        return self.variance * max(t, 1.0) ** (2.0 - self.alpha)

    def truncated_second_moment(self, c: float) -> float:
        if c <= 1:
            return 0.0
        if self.alpha == 2:
            return 2.0 * math.log(c)
        return self.variance * (1.0 - c ** (2.0 - self.alpha))

    def truncated_second_moment_quad(self, c: float) -> float:
        if c <= 1:
            return 0.0
        # in y = ln x the integrand α·e^{(2-α)y} is smooth on [0, ln c]
        value, _ = integrate.quad(
            lambda y: self.alpha * math.exp((2.0 - self.alpha) * y),
            0.0,
            math.log(c),
            epsabs=1e-14,
            epsrel=1e-12,
        )
        return value

    def is_functional_finite(self, a: float, b: float) -> bool:
        if self.alpha > 2:
            return True
        # α = 2: ∫ (log x)^a (loglog x)^(b-1) dx/x
        return a < -1 or (a == -1 and b < 0)

    def functional(self, a: float, b: float) -> float:
        if not self.is_functional_finite(a, b):
            return math.inf

        # y = ln|X|, so log|X| = max(y, 1) and loglog|X| = max(ln(max(y, 1)), 1)
        def integrand(y: float) -> float:
            log_x = max(y, 1.0)
            loglog_x = max(math.log(log_x), 1.0)
            return (
                self.alpha
                * math.exp((2.0 - self.alpha) * y)
                * log_x**a
                * loglog_x ** (b - 1.0)
            )

        total = 0.0
        for left, right in ((0.0, 1.0), (1.0, math.e), (math.e, math.inf)):
            value, _ = integrate.quad(
                integrand, left, right, epsabs=1e-14, epsrel=1e-11, limit=200
            )
            total += value
        return total


def build_distribution(
    kind: DistKind | str,
    *,
    sigma: float = 1.0,
    half_width: float = 1.0,
    alpha: float = 3.0,
) -> Distribution:
    kind = DistKind(kind)
    if kind == DistKind.normal:
        return Normal(sigma)
    if kind == DistKind.rademacher:
        return Rademacher()
    if kind == DistKind.uniform:
        return UniformSym(half_width)
    return TwoSidedPareto(alpha)
