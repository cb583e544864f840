from __future__ import annotations

import math

import numpy as np
import pytest

from lilrates.analytic import (
    _dual_series,
    _reflection_series,
    abs_normal_tail,
    alt_power_series,
    gamma_fn,
    log_e,
    log_normal_upper_tail,
    log_sup_wiener_tail,
    loglog,
    normal_upper_tail,
    phi,
    reflection_partial_sum,
    sup_wiener_tail,
)
from lilrates.errors import DomainError

CATALAN = 0.915965594177219015054603514932
# Σ(-1)^k/(2k+1)^4
DIRICHLET_BETA_4 = 0.988944551741105336108422633228
# seeded sample of (0, 6]
BRACKET_X = [float(x) for x in 6.0 - np.random.default_rng(2026).uniform(0, 6, 200)]


@pytest.mark.parametrize(
    "x, expected",
    [
        (0.5, 1.0),
        (1.0, 1.0),
        (math.e, 1.0),
        (math.e**2, 2.0),
        (1e10, 10 * math.log(10)),
    ],
)
def test_log_e(x, expected):
    assert log_e(x) == pytest.approx(expected, rel=1e-14)


def test_loglog_at_least_one():
    values = loglog(np.array([1.0, 3.0, 15.0, math.exp(math.e), 1e100]))
    assert isinstance(values, np.ndarray)
    assert np.all(values >= 1.0)
    assert values[-1] == pytest.approx(math.log(100 * math.log(10)))


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_log_e_domain(bad):
    with pytest.raises(DomainError):
        log_e(bad)


def test_phi():
    assert phi(1e6) == pytest.approx(math.sqrt(2e6 * math.log(math.log(1e6))))
    assert phi(2) == pytest.approx(2.0)


def test_scalars_come_back_as_float():
    assert isinstance(normal_upper_tail(1.0), float)
    assert isinstance(sup_wiener_tail(1.0), float)
    assert isinstance(gamma_fn(0.5), float)


def test_normal_upper_tail():
    assert normal_upper_tail(0.0) == 0.5
    assert normal_upper_tail(1.959963984540054) == pytest.approx(0.025, rel=1e-12)
    # far tail stays relatively accurate
    assert normal_upper_tail(30.0) == pytest.approx(4.906713927148187e-198, rel=1e-10)
    with pytest.raises(DomainError):
        normal_upper_tail(math.nan)


def test_log_normal_upper_tail_beyond_underflow():
    assert normal_upper_tail(40.0) == 0.0
    value = log_normal_upper_tail(40.0)
    # ln Q(x) ~ -x²/2 - ln(x√(2π))
    expected = -800.0 - math.log(40.0 * math.sqrt(2 * math.pi))
    assert value == pytest.approx(expected, rel=1e-3)


@pytest.mark.parametrize("x", [-3.0, -0.1, 0.0])
def test_abs_normal_tail_non_positive(x):
    assert abs_normal_tail(x) == 1.0


def test_abs_normal_tail():
    assert abs_normal_tail(1.0) == pytest.approx(0.31731050786291415, rel=1e-14)


def test_sup_wiener_tail_reference_value():
    expected = 4.0 * (
        normal_upper_tail(1.0) - normal_upper_tail(3.0) + normal_upper_tail(5.0)
    )
    assert sup_wiener_tail(1.0) == pytest.approx(expected, rel=1e-9)
    assert sup_wiener_tail(1.0) == pytest.approx(0.6292225, abs=1e-6)


def test_sup_wiener_tail_edges():
    assert sup_wiener_tail(0.0) == 1.0
    assert sup_wiener_tail(math.inf) == 0.0
    with pytest.raises(DomainError):
        sup_wiener_tail(-0.1)
    with pytest.raises(DomainError):
        sup_wiener_tail(1.0, tol=0.0)


@pytest.mark.parametrize("x", [0.3, 0.5, 0.8, 1.2])
def test_sup_wiener_dual_and_reflection_agree(x):
    arr = np.array([x])
    assert _dual_series(arr, 1e-14)[0] == pytest.approx(
        _reflection_series(arr, 1e-14)[0], abs=1e-12
    )


def test_sup_wiener_tail_monotone_and_above_abs():
    x = np.linspace(0.05, 6.0, 400)
    tail = sup_wiener_tail(x)
    assert np.all(np.diff(tail) <= 0)
    assert np.all(tail >= abs_normal_tail(x))
    assert np.all(tail <= 2 * abs_normal_tail(x) + 1e-15)


@pytest.mark.parametrize("x", BRACKET_X)
def test_reflection_even_odd_partial_sums_bracket(x):
    value = sup_wiener_tail(x, tol=1e-15)
    slack = 1e-15 + 1e-13 * value
    for m in (0, 2, 4):
        assert reflection_partial_sum(x, m) >= value - slack
        assert reflection_partial_sum(x, m + 1) <= value + slack


def test_reflection_partial_sum_domain():
    with pytest.raises(DomainError):
        reflection_partial_sum(-1.0, 2)
    with pytest.raises(DomainError):
        reflection_partial_sum(1.0, -1)


@pytest.mark.parametrize("x", [0.1, 0.7, 1.5, 3.0])
def test_log_sup_wiener_tail_matches_log(x):
    assert log_sup_wiener_tail(x) == pytest.approx(
        math.log(sup_wiener_tail(x)), rel=1e-10
    )


def test_log_sup_wiener_tail_far():
    value = log_sup_wiener_tail(50.0)
    assert math.isfinite(value)
    assert value == pytest.approx(
        math.log(4.0) + log_normal_upper_tail(50.0), rel=1e-12
    )


@pytest.mark.parametrize(
    "z, expected",
    [
        (0.5, math.sqrt(math.pi)),
        (1.0, 1.0),
        (1.5, math.sqrt(math.pi) / 2),
        (5.0, 24.0),
    ],
)
def test_gamma_fn(z, expected):
    assert gamma_fn(z) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("z", [0.0, -1.0, -0.5])
def test_gamma_fn_domain(z):
    with pytest.raises(DomainError):
        gamma_fn(z)


@pytest.mark.parametrize(
    "b, expected",
    [(0.0, CATALAN), (-0.5, math.pi / 4), (1.0, DIRICHLET_BETA_4)],
)
def test_alt_power_series(b, expected):
    assert alt_power_series(b) == pytest.approx(expected, abs=1e-11)


def test_alt_power_series_slowly_decaying_terms():
    # power 2b+2 = 0.2: terms barely decay, only acceleration works
    value = alt_power_series(-0.9)
    assert 0.5 < value < 1.0


@pytest.mark.parametrize("b", [-1.0, -2.0, math.nan])
def test_alt_power_series_domain(b):
    with pytest.raises(DomainError):
        alt_power_series(b)


def test_phi_convention_values():
    assert loglog(15.0) == 1.0
    assert phi(15.0) == pytest.approx(math.sqrt(30.0), rel=1e-14)
    assert phi(16.0) == pytest.approx(5.7126, abs=1e-4)
    assert phi(math.exp(math.e)) == pytest.approx(math.sqrt(2 * math.exp(math.e)))


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_normal_tail_symmetry(x):
    assert normal_upper_tail(x) + normal_upper_tail(-x) == pytest.approx(1.0)


def test_normal_tail_at_one():
    assert normal_upper_tail(1.0) == pytest.approx(0.15865525393145707, rel=1e-12)


def test_sup_wiener_tail_far_terms():
    value = sup_wiener_tail(3.0, tol=1e-12)
    assert 0 <= 4 * normal_upper_tail(3.0) - value <= 4 * normal_upper_tail(9.0)


@pytest.mark.parametrize("x", [3.0, 4.5, 6.0])
def test_sup_wiener_tail_twice_abs_asymptotically(x):
    ratio = sup_wiener_tail(x) / (2 * abs_normal_tail(x))
    bound = 4 * normal_upper_tail(3 * x) / normal_upper_tail(x)
    assert abs(ratio - 1) <= bound + 1e-14


@pytest.mark.parametrize("z", [0.5, 1.5, 2.5, 7.3])
def test_gamma_recurrence(z):
    assert gamma_fn(z + 1) == pytest.approx(z * gamma_fn(z), rel=1e-10)
