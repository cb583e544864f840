""" Special functions used throughout lilrates

    Logarithms follow the convention log x = ln(x ∨ e) so that log and loglog
    are both >= 1 on (0, ∞). Tails are upper tails P(Z >= x).

    Every function accepts a scalar or a numpy array; scalars come back as float.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from lilrates.errors import DomainError

# sup|W| tail switches to the theta-function (dual) series below this argument
DUAL_SERIES_BELOW = 0.25
MAX_SERIES_TERMS = 1_000_000
TERM_FLOOR = 1e-300
# alternating power series: largest term count summed directly
MAX_DIRECT_TERMS = 1_000_000
CVZ_RATE = 3.0 + math.sqrt(8.0)

Real = float | np.ndarray


def _array(value, name: str) -> tuple[np.ndarray, bool]:
    arr = np.asarray(value, dtype=np.float64)
    if np.any(np.isnan(arr)):
        raise DomainError(f"{name} must not be NaN")
    return arr, arr.ndim == 0


def _result(arr: np.ndarray, *, scalar: bool) -> Real:
    return float(arr) if scalar else arr


def log_e(x: Real) -> Real:
    """ln(max(x, e)) ; always >= 1"""
    arr, scalar = _array(x, "x")
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("log_e requires finite x > 0")
    return _result(np.log(np.maximum(arr, math.e)), scalar=scalar)


def loglog(x: Real) -> Real:
    """log_e(log_e(x)) ; always >= 1"""
    return log_e(log_e(x))


def phi(n: Real) -> Real:
    """LIL normaliser sqrt(2 n loglog n)"""
    arr, scalar = _array(n, "n")
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("phi requires finite n > 0")
    return _result(np.sqrt(2.0 * arr * np.asarray(loglog(arr))), scalar=scalar)


def normal_upper_tail(x: Real) -> Real:
    """Q(x) = P(N >= x) for a standard normal N

    Values below the subnormal range flush to 0 (x > ~38.5)"""
    arr, scalar = _array(x, "x")
    if np.any(~np.isfinite(arr)):
        raise DomainError("normal_upper_tail requires finite x")
    return _result(special.ndtr(-arr), scalar=scalar)


def log_normal_upper_tail(x: Real) -> Real:
    """ln Q(x), finite far past the underflow of Q"""
    arr, scalar = _array(x, "x")
    return _result(special.log_ndtr(-arr), scalar=scalar)


def abs_normal_tail(x: Real) -> Real:
    """P(|N| >= x): 2·Q(x) for x >= 0 and 1 below"""
    arr, scalar = _array(x, "x")
    if np.any(~np.isfinite(arr)):
        raise DomainError("abs_normal_tail requires finite x")
    out = np.where(arr <= 0, 1.0, 2.0 * special.ndtr(-np.abs(arr)))
    return _result(out, scalar=scalar)


def log_abs_normal_tail(x: Real) -> Real:
    arr, scalar = _array(x, "x")
    out = np.where(arr <= 0, 0.0, math.log(2.0) + special.log_ndtr(-np.abs(arr)))
    return _result(out, scalar=scalar)


def _reflection_series(x: np.ndarray, tol: float) -> np.ndarray:
    """4·Σ(-1)^k Q((2k+1)x) for x > 0, stopped on the next-term rule"""
    total = np.zeros_like(x)
    pending = special.ndtr(-x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(MAX_SERIES_TERMS):
        idx = np.flatnonzero(active)
        if not idx.size:
            break
        if k % 2 == 0:
            total[idx] += pending[idx]
        else:
            total[idx] -= pending[idx]
        pending[idx] = special.ndtr(-(2 * k + 3) * x[idx])
        done = (pending[idx] < tol * np.abs(total[idx])) | (pending[idx] < TERM_FLOOR)
        active[idx[done]] = False
    return np.clip(4.0 * total, 0.0, 1.0)


def _dual_series(x: np.ndarray, tol: float) -> np.ndarray:
    """1 - (4/π)·Σ(-1)^k/(2k+1)·exp(-(2k+1)²π²/(8x²)) for small x > 0"""
    scale = -(math.pi**2) / (8.0 * x * x)
    inside = np.zeros_like(x)
    for k in range(MAX_SERIES_TERMS):
        term = np.exp((2 * k + 1) ** 2 * scale) / (2 * k + 1)
        inside += term if k % 2 == 0 else -term
        if np.all((term < tol * np.abs(inside)) | (term < TERM_FLOOR)):
            break
    return np.clip(1.0 - 4.0 / math.pi * inside, 0.0, 1.0)


def sup_wiener_tail(x: Real, tol: float = 1e-12) -> Real:
    """P(sup_{0<=s<=1} |W(s)| >= x) for a standard Wiener process W

    Truncation error is below the first omitted term of the alternating series.
    The value at x = 0 is 1 (limit of the distribution tail)."""
    arr, scalar = _array(x, "x")
    if np.any(arr < 0):
        raise DomainError("sup_wiener_tail requires x >= 0")
    if tol <= 0:
        raise DomainError("tol must be positive")

    flat = arr.ravel()
    out = np.ones_like(flat)
    small = (flat > 0) & (flat < DUAL_SERIES_BELOW)
    large = flat >= DUAL_SERIES_BELOW
    if np.any(small):
        out[small] = _dual_series(flat[small], tol)
    if np.any(large):
        finite = large & np.isfinite(flat)
        out[large & ~finite] = 0.0
        out[finite] = _reflection_series(flat[finite], tol)
    return _result(out.reshape(arr.shape), scalar=scalar)


def log_sup_wiener_tail(x: Real, tol: float = 1e-12) -> Real:
    """ln P(sup|W| >= x), finite for large x where the tail underflows"""
    arr, scalar = _array(x, "x")
    flat = np.maximum(arr.ravel(), 0.0)
    out = np.zeros_like(flat)

    moderate = flat < 1.0
    if np.any(moderate):
        out[moderate] = np.log(sup_wiener_tail(flat[moderate], tol))

    large = ~moderate
    if np.any(large):
        xl = flat[large]
        lead = special.log_ndtr(-xl)
        correction = np.zeros_like(xl)
        for k in range(1, MAX_SERIES_TERMS):
            ratio = np.exp(special.log_ndtr(-(2 * k + 1) * xl) - lead)
            correction += -ratio if k % 2 else ratio
            if np.all(ratio < tol):
                break
        out[large] = math.log(4.0) + lead + np.log1p(correction)
    return _result(out.reshape(arr.shape), scalar=scalar)


def reflection_partial_sum(x: float, m: int) -> float:
    """4·Σ_{k<=m} (-1)^k Q((2k+1)x): brackets sup_wiener_tail(x) as m alternates"""
    if x < 0 or m < 0:
        raise DomainError("reflection_partial_sum requires x >= 0 and m >= 0")
    k = np.arange(m + 1)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    return float(4.0 * math.fsum(signs * special.ndtr(-(2 * k + 1) * x)))


def gamma_fn(z: Real) -> Real:
    arr, scalar = _array(z, "z")
    if np.any(arr <= 0) or np.any(~np.isfinite(arr)):
        raise DomainError("gamma_fn requires finite z > 0")
    return _result(special.gamma(arr), scalar=scalar)


def _cvz_alternating(terms, count: int) -> float:
    """Cohen-Villegas-Zagier acceleration of Σ(-1)^k a_k for moment sequences a_k"""
    d = CVZ_RATE**count
    d = (d + 1.0 / d) / 2.0
    b = -1.0
    c = -d
    acc = 0.0
    for k in range(count):
        c = b - c
        acc += c * terms(k)
        b = (k + count) * (k - count) * b / ((k + 0.5) * (k + 1))
    return acc / d


def alt_power_series(b: float, tol: float = 1e-12) -> float:
    """Σ_{k>=0} (-1)^k / (2k+1)^(2b+2), error below tol

    Terms are a Hausdorff moment sequence, so the accelerated sum is certified
    by 2·a_0/(3+√8)^n ; direct summation is bracketed by the first omitted term."""
    if not math.isfinite(b) or b <= -1:
        raise DomainError("alt_power_series requires b > -1")
    if tol <= 0:
        raise DomainError("tol must be positive")
    power = 2.0 * b + 2.0

    # smallest K with (2K+1)^-power <= tol, computed in log-space
    log_needed = -math.log(tol) / power
    if power > 1.0 and log_needed < math.log(2 * MAX_DIRECT_TERMS + 1):
        count = max(1, math.ceil((math.exp(log_needed) - 1.0) / 2.0))
        k = np.arange(count, dtype=np.float64)
        terms = (2.0 * k + 1.0) ** -power
        terms[1::2] *= -1.0
        omitted = (2.0 * count + 1.0) ** -power
        # midpoint of the bracket [S_K, S_{K+1}]
        sign = 1.0 if count % 2 == 0 else -1.0
        return math.fsum(terms) + sign * omitted / 2.0

    count = max(1, math.ceil(math.log(2.0 / tol) / math.log(CVZ_RATE)))
    return _cvz_alternating(lambda k: (2.0 * k + 1.0) ** -power, count)
