import math
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from qgevrey.gevrey import (
    InsufficientData,
    borel,
    borel_radius,
    gevrey_fit,
    inverse_borel,
    log_abs,
)
from qgevrey.habiro import HabiroElement, taylor_T
from qgevrey.series import Fps, VarTagMismatch, fps_exp

from strategies import fps


def test_fit_factorial():
    rep = gevrey_fit([factorial(n) for n in range(61)])
    assert abs(rep.s_hat - 1) <= 0.02
    assert abs(rep.c_hat - 1) < 0.02
    assert rep.reliable


def test_fit_geometric():
    rep = gevrey_fit([Fraction(1, 2**n) for n in range(61)])
    assert abs(rep.s_hat) <= 0.05
    assert abs(rep.c_hat - 0.5) < 1e-6


def test_fit_with_prefactor_and_gaps():
    # n! n^{3/2} 3^n on even indices only
    coeffs = [0] * 81
    for n in range(2, 81, 2):
        coeffs[n] = Fraction(round(factorial(n) * n**1.5 * 3**n))
    rep = gevrey_fit(coeffs)
    assert abs(rep.s_hat - 1) < 2e-3
    assert abs(rep.c_hat - 3) / 3 < 1e-2


def test_fit_errors_and_reliability():
    with pytest.raises(InsufficientData):
        gevrey_fit([0] * 20)
    with pytest.raises(InsufficientData):
        gevrey_fit([1, 0, 0, 0, 1])
    rep = gevrey_fit([1, 1, 2, 6, 24])
    assert not rep.reliable
    assert set(rep.to_json()) == {"s_hat", "log_c_hat", "n_used", "residual"}


def test_trefoil_normalized_fit():
    f = taylor_T(HabiroElement.builtin("trefoil"), 80) * fps_exp(Fps([0, Fraction(-1, 24)] + [0] * 79, "inv_x"))
    rep = gevrey_fit(f.coeffs)
    assert 0.9 <= rep.s_hat <= 1.1
    assert abs(rep.c_hat / (6 / math.pi**2) - 1) < 0.05


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.integers(1, 1000), min_size=40, max_size=40),
    st.sampled_from([Fraction(2), Fraction(1, 3)]),
)
def test_fit_shift_invariant(noise, r):
    a = [Fraction(noise[n] * factorial(n), 7) for n in range(40)]
    base = gevrey_fit(a)
    scaled = gevrey_fit([c * r**n for n, c in enumerate(a)])
    assert abs(scaled.s_hat - base.s_hat) < 1e-9 + base.residual
    assert abs(scaled.log_c_hat - base.log_c_hat - math.log(r)) < 1e-9 + base.residual


def test_borel_examples():
    euler = Fps([0] + [factorial(n - 1) for n in range(1, 21)], "inv_x")
    g, a0 = borel(euler)
    assert a0 == 0 and g == Fps([1] * 20, "p")
    g, a0 = borel(Fps.constant(5, 6, "inv_x"))
    assert a0 == 5 and not any(g.coeffs)
    alt = Fps([0] + [(-1) ** (n - 1) * factorial(n - 1) for n in range(1, 21)], "inv_x")
    assert borel(alt)[0] == Fps([(-1) ** n for n in range(20)], "p")
    with pytest.raises(VarTagMismatch):
        borel(Fps([1, 2], "p"))


def test_inverse_borel_examples():
    assert inverse_borel(Fps.constant(1, 5, "p"), 0) == Fps([0, 1, 0, 0, 0, 0, 0], "inv_x")
    assert inverse_borel(Fps([1] * 5, "p")) == Fps([0] + [factorial(n - 1) for n in range(1, 6)], "inv_x")
    assert inverse_borel(Fps.zero(3, "p"), 7) == Fps([7, 0, 0, 0, 0], "inv_x")


@settings(max_examples=30, deadline=None)
@given(fps(40, "inv_x"))
def test_borel_round_trip(f):
    assert inverse_borel(*borel(f)) == f


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.fractions(min_value=-1, max_value=1, max_denominator=50), min_size=30, max_size=30),
    st.sampled_from([Fraction(1), Fraction(2), Fraction(5, 2)]),
)
def test_gevrey_one_implies_borel_bound(ratios, C):
    a = [r * C**n * factorial(n) for n, r in enumerate(ratios)]
    g, _ = borel(Fps(a, "inv_x"))
    for n, c in enumerate(g.coeffs):
        assert abs(c) <= C ** (n + 1) * (n + 1)


def test_radius_examples():
    assert abs(borel_radius(Fps([1] * 60, "p")) - 1) < 0.02
    assert borel_radius(Fps([Fraction(1, factorial(n)) for n in range(60)], "p")) == math.inf
    assert abs(borel_radius(Fps([Fraction(1, 3**n) for n in range(60)], "p")) - 3) < 0.06
    with pytest.raises(InsufficientData):
        borel_radius(Fps([1] * 5, "p"))


def test_radius_with_algebraic_singularity():
    # (1 - p/2)^{-5/2}: radius 2 with a polynomial prefactor n^{3/2}
    g = [Fraction(1)]
    for n in range(1, 80):
        g.append(g[-1] * Fraction(2 * n + 3, 2 * n) / 2)
    assert abs(borel_radius(Fps(g, "p")) - 2) / 2 < 0.02


def test_log_abs_big_rationals():
    assert log_abs(Fraction(factorial(300), 7)) == pytest.approx(math.lgamma(301) - math.log(7), rel=1e-12)
