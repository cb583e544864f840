""" Limit constants of the precise-rate LIL series

    Two regimes:
    - thm1: weights (log n)^a (loglog n)^b / n, critical epsilon √(1+a)
    - thm2: weights (loglog n)^b / (n log n), critical epsilon 0

    and two statistics: `max` (running maximum M_n, sup-Wiener tail) and
    `abs` (|S_n|, normal tail)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import special

from lilrates.analytic import alt_power_series, gamma_fn
from lilrates.errors import DomainError


class Regime(enum.Enum):
    thm1 = "thm1"
    thm2 = "thm2"


class Statistic(enum.Enum):
    max = "max"
    abs = "abs"


@dataclass(frozen=True)
class WeightExponents:
    a: float = 0.0
    b: float = 0.0

    def check(self, regime: Regime):
        if not math.isfinite(self.a) or not math.isfinite(self.b):
            raise DomainError("weight exponents must be finite")
        if regime == Regime.thm1:
            if self.a <= -1:
                raise DomainError(f"thm1 requires a > -1 (got a={self.a})")
            if self.b <= -0.5:
                raise DomainError(f"thm1 requires b > -1/2 (got b={self.b})")
        elif self.b <= -1:
            raise DomainError(f"thm2 requires b > -1 (got b={self.b})")


def _check_tau(tau: float):
    if not math.isfinite(tau):
        raise DomainError("tau must be finite")


def thm1_constant(w: WeightExponents, tau: float, statistic: Statistic) -> float:
    """2·√(1/(π(a+1)))·exp(-2τ√(1+a))·Γ(b+1/2) for max, half of it for abs"""
    w.check(Regime.thm1)
    _check_tau(tau)
    root = math.sqrt(1.0 + w.a)
    value = (
        2.0
        * math.sqrt(1.0 / (math.pi * (w.a + 1.0)))
        * math.exp(-2.0 * tau * root)
        * gamma_fn(w.b + 0.5)
    )
    return value if statistic == Statistic.max else value / 2.0


def thm2_constant(b: float, statistic: Statistic) -> float:
    """Γ(b+3/2)/((b+1)√π) for abs ; 2·that·Σ(-1)^k/(2k+1)^(2b+2) for max"""
    WeightExponents(a=-1.0, b=b).check(Regime.thm2)
    base = gamma_fn(b + 1.5) / ((b + 1.0) * math.sqrt(math.pi))
    if statistic == Statistic.abs:
        return base
    return 2.0 * base * alt_power_series(b)


def limit_constant(
    regime: Regime, w: WeightExponents, tau: float, statistic: Statistic
) -> float:
    """constant the normalized series tends to ; tau is ignored for thm2"""
    if regime == Regime.thm1:
        return thm1_constant(w, tau, statistic)
    return thm2_constant(w.b, statistic)


def theorem_a_constant() -> float:
    """a = b = τ = 0, abs statistic"""
    return thm1_constant(WeightExponents(0.0, 0.0), 0.0, Statistic.abs)


def theorem_b_constant(sigma: float) -> float:
    """limit under the ε'·√(n loglog n) normalization

    equals 2σ²·thm2_constant(0, abs)"""
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    return 2.0 * sigma**2 * thm2_constant(0.0, Statistic.abs)


def theorem_b_epsilon(eps_b: float, sigma: float) -> float:
    """ε such that ε·σ·φ(n) equals eps_b·√(n loglog n)"""
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    return eps_b / (sigma * math.sqrt(2.0))


def critical_epsilon(regime: Regime, w: WeightExponents) -> float:
    w.check(regime)
    return math.sqrt(1.0 + w.a) if regime == Regime.thm1 else 0.0


def thm1_leading_order(
    w: WeightExponents, tau: float, epsilon: float, statistic: Statistic
) -> float:
    """Finite-ε prediction of the normalized thm1 series

    The integral representation in y = u·(ε²-1-a) starts at y = ε²-1-a
    instead of 0, which turns Γ(b+1/2) into the upper incomplete gamma."""
    w.check(Regime.thm1)
    gap = epsilon**2 - 1.0 - w.a
    if gap <= 0:
        raise DomainError(f"epsilon^2 must exceed 1 + a (got gap={gap})")
    return thm1_constant(w, tau, statistic) * float(special.gammaincc(w.b + 0.5, gap))
