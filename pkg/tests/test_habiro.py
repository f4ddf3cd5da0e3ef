import math
import threading
from fractions import Fraction
from math import factorial

import pytest

from qgevrey.exact import LaurentPoly, eval_at_one, parse_laurent, span
from qgevrey.habiro import (
    HabiroElement,
    element_from_json,
    nicely_bounded_check,
    pochhammer,
    pochhammer_inverse,
    taylor_T,
    taylor_TZ,
)
from qgevrey.series import Fps, fps_compose

BUILTIN_NAMES = ("trefoil", "fig8", "habiro_one")


def product_pochhammer(n):
    p = LaurentPoly.constant(1)
    for k in range(1, n + 1):
        p = p * LaurentPoly({0: 1, k: -1})
    return p


def test_pochhammer_examples():
    assert pochhammer(0) == LaurentPoly.constant(1)
    assert pochhammer(2) == parse_laurent("1 - q - q^2 + q^3")
    assert pochhammer(3) == parse_laurent("1 - q - q^2 + q^4 + q^5 - q^6")
    with pytest.raises(ValueError):
        pochhammer(-1)


def test_pochhammer_against_product_and_invariants():
    for n in range(1, 41):
        p = pochhammer(n)
        assert p == product_pochhammer(n)
        assert span(p) == (0, n * (n + 1) // 2)
        assert eval_at_one(p) == 0


def test_pochhammer_thread_safe_fill():
    results = {}

    def work(k):
        results[k] = [pochhammer(n) for n in range(0, 260, 7)]

    threads = [threading.Thread(target=work, args=(k,)) for k in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    first = results[0]
    assert all(r == first for r in results.values())
    assert pochhammer(259) == pochhammer(258) * LaurentPoly({0: 1, 259: -1})


def test_pochhammer_inverse():
    assert pochhammer_inverse(2) == parse_laurent("1 - q^-1 - q^-2 + q^-3")


def test_builtin_terms():
    assert HabiroElement.builtin("trefoil").term(7) == LaurentPoly.constant(1)
    assert HabiroElement.builtin("fig8").term(3) == pochhammer_inverse(3)
    assert HabiroElement.builtin("habiro_one").term(4) == LaurentPoly({5: -1})
    with pytest.raises(ValueError):
        HabiroElement.builtin("unknot")


def test_fig8_summands_match_products():
    fig8 = HabiroElement.builtin("fig8")
    for n, s in enumerate(fig8.summands(12)):
        assert s == pochhammer(n) * pochhammer_inverse(n)


def test_taylor_examples():
    trefoil = HabiroElement.builtin("trefoil")
    assert taylor_T(trefoil, 1) == Fps([1, -1], "inv_x")
    assert taylor_TZ(trefoil, 1) == Fps([1, -1], "inv_x")
    assert taylor_T(HabiroElement.builtin("fig8"), 2) == Fps([1, 0, -1], "inv_x")
    assert taylor_TZ(HabiroElement.explicit(["1"]), 10) == Fps.constant(1, 10, "inv_x")


def test_habiro_one_is_minus_one():
    # sum_n -q^{n+1} (q)_n telescopes to (q)_{M+1} - 1, whose expansions are -1.
    phi = HabiroElement.builtin("habiro_one")
    assert taylor_T(phi, 30) == Fps.constant(-1, 30, "inv_x")
    assert taylor_TZ(phi, 20) == Fps.constant(-1, 20, "inv_x")
    for M in range(6):
        assert phi.partial_sum(M) == pochhammer(M + 1) - 1


def test_positive_sign_variant_is_one():
    plus = HabiroElement.explicit([LaurentPoly({n + 1: 1}) for n in range(31)])
    assert taylor_T(plus, 30) == Fps.constant(1, 30, "inv_x")
    assert taylor_TZ(plus, 30) == Fps.constant(1, 30, "inv_x")


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_truncation_stability(name):
    phi = HabiroElement.builtin(name)
    N = 16
    ref = taylor_T(phi, N)
    for extra in (1, 3, 8):
        assert taylor_T(phi, N, n_stop=phi.n_stop(N) + extra) == ref
        assert taylor_TZ(phi, N, n_stop=phi.n_stop(N) + extra) == taylor_TZ(phi, N)


def test_fig8_cutoff_is_needed():
    phi = HabiroElement.builtin("fig8")
    N = 10
    assert taylor_T(phi, N, n_stop=phi.n_stop(N) - 1) != taylor_T(phi, N)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_T_equals_TZ_composed_with_expm1(name):
    N = 25
    phi = HabiroElement.builtin(name)
    inner = Fps([0] + [Fraction(1, factorial(k)) for k in range(1, N + 1)], "inv_x")
    assert taylor_T(phi, N) == fps_compose(taylor_TZ(phi, N), inner)


def test_trefoil_T_by_brute_force():
    # direct float evaluation of sum (q)_n at q = e^{1/x} is hopeless; check
    # instead a few exact coefficients against a hand expansion
    t = taylor_T(HabiroElement.builtin("trefoil"), 3)
    # (e^u)_1 = -u - u^2/2 - u^3/6; (e^u)_2 = (1-e^u)(1-e^{2u}) = 2u^2 + 3u^3 + ...
    # (e^u)_3 = -6u^3 + ...
    assert t == Fps([1, -1, Fraction(-1, 2) + 2, Fraction(-1, 6) + 3 - 6], "inv_x")


def test_growth_bounds_are_finite():
    phi = HabiroElement.builtin("trefoil")
    f = taylor_T(phi, 40)
    worst = max((abs(float(f[n])) / factorial(n)) ** (1 / n) for n in range(1, 41) if f[n])
    assert math.isfinite(worst) and worst < 2


def test_nicely_bounded_examples():
    rep = nicely_bounded_check(HabiroElement.builtin("trefoil"), 50, 1, 1.0)
    assert rep.cprime_observed == 0 and rep.c_observed == 1 and rep.passed
    seq = HabiroElement.explicit([pochhammer(n) for n in range(101)])
    rep = nicely_bounded_check(seq, 100, 1, 2.0)
    assert rep.cprime_observed <= 1 and rep.c_observed <= 2 and rep.passed
    cubic = HabiroElement.explicit([LaurentPoly({n**3: 1}) for n in range(11)])
    rep = nicely_bounded_check(cubic, 10, 5, 2.0)
    assert rep.cprime_observed == 10 and not rep.passed
    assert set(rep.to_json()) == {"n_max", "cprime_observed", "c_observed", "pass"}
    with pytest.raises(ValueError):
        nicely_bounded_check(seq, 0, 1, 2.0)


def test_element_from_json():
    assert element_from_json({"kind": "builtin", "name": "fig8"}) == HabiroElement.builtin("fig8")
    e = element_from_json({"kind": "explicit", "terms": ["1", "q"]})
    assert e.term(1) == LaurentPoly({1: 1}) and e.term(5) == LaurentPoly()
    r = element_from_json({"kind": "qholonomic", "coeffs": ["-1", "1"], "initial": ["1"]})
    assert taylor_T(r, 12) == taylor_T(HabiroElement.builtin("trefoil"), 12)
    with pytest.raises(ValueError):
        element_from_json({"kind": "mystery"})
