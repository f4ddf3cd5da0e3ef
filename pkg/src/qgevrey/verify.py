"""Built-in verification suite: one named check per acceptance criterion.

Each check returns a :class:`CheckResult` carrying a pass flag and the
measured quantities, so the report doubles as a record of the numbers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

from .exact import l1_norm, span
from .gevrey import borel, borel_radius, gevrey_fit
from .habiro import HabiroElement, pochhammer, taylor_T, taylor_TZ
from .oracles import Ei, exp_E1
from .qholonomic import advance, builtin_recurrences, verify_solution
from .reparam import compose_expm1, compose_log1p, transform_a_to_b, transform_b_to_a
from .resum import pade, poles, resum_series
from .series import Fps, fps_derive_in_x, fps_exp
from .specfun import (
    diagram_bounds,
    modified_bernoulli,
    nu_norm_check,
    trefoil_H_coeff,
)
from .specs import SeriesSpec

__all__ = [
    "CheckResult",
    "CHECKS",
    "run_checks",
    "PI2_6",
    "TREFOIL_R",
    "normalized_trefoil",
    "trefoil_conventions",
]

PI2_6 = math.pi**2 / 6
TREFOIL_R = Fraction(-1, 24)


@dataclass(frozen=True)
class CheckResult:
    name: str
    criterion: int
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "criterion": self.criterion, "pass": self.passed, "details": self.details}


def _exp_factor(r: Fraction, N: int) -> Fps:
    return fps_exp(Fps([0, r] + [0] * (N - 1), "inv_x"))


def normalized_trefoil(N: int) -> Fps:
    """``e^{-1/(24x)}`` times the trefoil series at ``q = e^{1/x}``."""
    return taylor_T(HabiroElement.builtin("trefoil"), N) * _exp_factor(TREFOIL_R, N)


def trefoil_conventions(N: int) -> dict[str, Fps]:
    """The four sign conventions ``q = e^{s/x}`` with prefactor ``e^{t/(24x)}``."""
    base = taylor_T(HabiroElement.builtin("trefoil"), N)
    out = {}
    for qs, q_series in (("+", base), ("-", base.flip())):
        for ps in ("-", "+"):
            r = Fraction(-1 if ps == "-" else 1, 24)
            out[f"q=e^({qs}1/x), prefactor e^({ps}1/(24x))"] = q_series * _exp_factor(r, N)
    return out


def check_euler() -> CheckResult:
    N = 60
    f = SeriesSpec.from_builtin("euler").resolve(N)
    residual = fps_derive_in_x(f) + f - Fps([0, 1] + [0] * (N - 1), "inv_x")
    g, a0 = borel(f)
    rf = pade(g, 1)
    z = poles(rf).smallest()
    ok_ode = not any(residual.coeffs)
    ok_borel = all(c == 1 for c in g.coeffs) and a0 == 0
    ok_den = tuple(Fraction(c) for c in rf.den) == (1, -1)
    ok_pole = abs(z - 1.0) < 1e-12
    return CheckResult("euler", 1, ok_ode and ok_borel and ok_den and ok_pole, {
        "ode_residual_zero": ok_ode,
        "borel_all_one": ok_borel,
        "pade_denominator": [str(c) for c in rf.den],
        "pole_error": abs(z - 1.0),
    })


def check_resum_oracle() -> CheckResult:
    N = 30
    alt = SeriesSpec.from_builtin("euler-alternating").resolve(N)
    v1 = resum_series(alt, 3.0, m=1, theta=0.0).value
    ref1 = exp_E1(3.0)
    eul = SeriesSpec.from_builtin("euler").resolve(N)
    v2 = resum_series(eul, 2.0, m=1, theta=math.pi / 18, median=True).value
    ref2 = math.exp(-2.0) * Ei(2.0)
    e1, e2 = abs(v1 - ref1), abs(v2 - ref2)
    return CheckResult("resum-oracle", 2, e1 < 1e-8 and e2 < 1e-5, {
        "alternating_x3": v1.real, "e3_E1_3": ref1, "error_alternating": e1,
        "median_x2": v2.real, "em2_Ei_2": ref2, "error_median": e2,
    })


def check_bernoulli() -> CheckResult:
    table = modified_bernoulli(30)
    b = table.modified
    ok_values = (b[2], b[4], b[6]) == (Fraction(1, 48), Fraction(-1, 5760), Fraction(1, 362880))
    bad = [n for n in range(1, 31) if not table.identity_holds(n)]
    return CheckResult("bernoulli", 3, ok_values and not bad, {
        "b2": str(b[2]), "b4": str(b[4]), "b6": str(b[6]), "identity_failures": bad,
    })


def check_nu_norm() -> CheckResult:
    ok, lhs, rhs = nu_norm_check(40)
    first = next((n for n in range(41) if lhs[n] != rhs[n]), None)
    return CheckResult("nu-norm", 4, ok, {"order": 40, "first_mismatch": first})


def check_habiro_one() -> CheckResult:
    phi = HabiroElement.builtin("habiro_one")
    one = Fps.constant(1, 30, "inv_x")
    t, tz = taylor_T(phi, 30), taylor_TZ(phi, 30)
    return CheckResult("habiro-one", 5, t == one and tz == one, {
        "taylor_T_head": [str(c) for c in t.coeffs[:4]],
        "taylor_TZ_head": [str(c) for c in tz.coeffs[:4]],
        "expected_constant": "1",
    })


def check_pochhammer() -> CheckResult:
    bad_span, bad_norm = [], []
    for n in range(201):
        p = pochhammer(n)
        if span(p) != (0, n * (n + 1) // 2):
            bad_span.append(n)
        if l1_norm(p) > 2**n:
            bad_norm.append(n)
    return CheckResult("pochhammer", 6, not bad_span and not bad_norm, {
        "n_max": 200, "span_failures": bad_span, "norm_failures": bad_norm,
    })


def check_qholonomic() -> CheckResult:
    recs = {r.name: r for r in builtin_recurrences()}
    table = advance(recs["pochhammer"], 50)
    mismatch = [n for n in range(51) if table[n] != pochhammer(n)]
    roundtrip = {name: verify_solution(r, advance(r, 30)) for name, r in sorted(recs.items())}
    return CheckResult("qholonomic", 7, not mismatch and all(roundtrip.values()), {
        "table_mismatches": mismatch, "roundtrip": roundtrip,
    })


def check_trefoil_pole() -> CheckResult:
    N = 80
    g, _ = borel(normalized_trefoil(N))
    radius = borel_radius(g)
    z10 = poles(pade(g, 10)).smallest()
    z20 = poles(pade(g, 20)).smallest()
    nearest = math.copysign(PI2_6, z20.real)
    radius_err = abs(radius - PI2_6) / PI2_6
    pole_err = abs(z20 - nearest) / PI2_6
    realness = abs(z20.imag) / abs(z20)
    move = abs(abs(z20) - abs(z10)) / abs(z10)
    ok = radius_err < 0.02 and pole_err < 0.01 and realness < 0.01 and move < 0.005
    return CheckResult("trefoil-pole", 8, ok, {
        "radius_estimate": radius, "radius_rel_error": radius_err,
        "pole_m20": {"re": z20.real, "im": z20.imag}, "pole_rel_error": pole_err,
        "imag_over_modulus": realness,
        "pole_m10": {"re": z10.real, "im": z10.imag}, "modulus_change_m10_m20": move,
        "complex_displacement_m10_m20": abs(z20 - z10) / abs(z10),
    })


def check_trefoil_H() -> CheckResult:
    ref = [trefoil_H_coeff(k) for k in range(7)]
    results = {}
    for label, f in trefoil_conventions(8).items():
        g, _ = borel(f)
        errs = [abs(float(g[k]) - ref[k]) / abs(ref[k]) for k in range(7)]
        results[label] = max(errs)
    passing = sorted(label for label, e in results.items() if e < 1e-6)
    return CheckResult("trefoil-H", 9, bool(passing), {
        "max_rel_error": results, "passing_conventions": passing,
    })


def check_gevrey() -> CheckResult:
    fact = gevrey_fit([factorial(n) for n in range(61)])
    geo = gevrey_fit([Fraction(1, 2**n) for n in range(61)])
    tre = gevrey_fit(normalized_trefoil(80).coeffs)
    fig = gevrey_fit(taylor_T(HabiroElement.builtin("fig8"), 80).coeffs)
    c_ratio = tre.c_hat / (6 / math.pi**2)
    ok = (
        abs(fact.s_hat - 1) <= 0.05 and abs(geo.s_hat) <= 0.05
        and 0.9 <= tre.s_hat <= 1.1 and 0.9 <= fig.s_hat <= 1.1
        and abs(c_ratio - 1) < 0.05
    )
    return CheckResult("gevrey", 10, ok, {
        "factorial": fact.to_json(), "geometric": geo.to_json(),
        "trefoil_normalized": tre.to_json(), "fig8": fig.to_json(),
        "trefoil_C_over_6_pi2": c_ratio,
    })


def check_reparam(seed: int = 20160101) -> CheckResult:
    N = 20
    elements = {}
    for name in ("trefoil", "fig8", "habiro_one"):
        phi = HabiroElement.builtin(name)
        t = list(taylor_T(phi, N).coeffs)
        tz = list(taylor_TZ(phi, N).coeffs)
        elements[name] = {
            "inverse_matrix_TZ_to_T": transform_a_to_b(tz, N) == t,
            "matrix_T_to_TZ": transform_b_to_a(t, N) == tz,
            "matrix_TZ_to_T": transform_b_to_a(tz, N) == t,
        }
    rng = random.Random(seed)
    oracle_ok = 0
    for _ in range(20):
        v = [Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(N + 1)]
        if transform_b_to_a(v, N) == compose_log1p(v, N) and transform_a_to_b(v, N) == compose_expm1(v, N):
            oracle_ok += 1
    ok = oracle_ok == 20 and all(
        e["inverse_matrix_TZ_to_T"] and e["matrix_T_to_TZ"] for e in elements.values()
    )
    return CheckResult("reparam", 11, ok, {
        "elements": elements, "random_oracle_agreements": oracle_ok,
        "matrix_equals": "composition with log(1+u)",
    })


def check_diagram() -> CheckResult:
    bracket_fail = []
    ratios = []
    for n in range(1, 51):
        matchings, (lo, hi) = diagram_bounds(n)
        nf = factorial(n)
        if not (lo < nf <= hi):
            bracket_fail.append(n)
        ratios.append(Fraction(matchings, nf**3))
    fit = gevrey_fit([1] + ratios)
    base = fit.c_hat
    ok = not bracket_fail and abs(fit.s_hat) < 0.05 and math.isfinite(base)
    return CheckResult("diagram", 12, ok, {
        "bracket_failures": bracket_fail, "fit": fit.to_json(), "measured_base": base,
    })


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "euler": check_euler,
    "resum-oracle": check_resum_oracle,
    "bernoulli": check_bernoulli,
    "nu-norm": check_nu_norm,
    "habiro-one": check_habiro_one,
    "pochhammer": check_pochhammer,
    "qholonomic": check_qholonomic,
    "trefoil-pole": check_trefoil_pole,
    "trefoil-H": check_trefoil_H,
    "gevrey": check_gevrey,
    "reparam": check_reparam,
    "diagram": check_diagram,
}


def run_checks(names: list[str] | None = None) -> list[CheckResult]:
    names = list(CHECKS) if not names or names == ["all"] else names
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    return [CHECKS[n]() for n in names]
