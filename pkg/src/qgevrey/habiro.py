"""q-Pochhammer symbols, Habiro-ring elements and their Taylor maps at q = 1.

An element is ``sum_n f_n(q) (q)_n``.  Two expansions are provided:

* :func:`taylor_T` substitutes ``q = e^{1/x}``,
* :func:`taylor_TZ` substitutes ``q = 1 + 1/x``.

Both work on the finite partial sum up to the cutoff where the summands'
valuation in ``1/x`` exceeds the requested order, so the results are exact.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .exact import LaurentPoly, l1_norm, parse_laurent, span
from .series import Fps

__all__ = [
    "pochhammer",
    "pochhammer_inverse",
    "HabiroElement",
    "BoundReport",
    "taylor_T",
    "taylor_TZ",
    "nicely_bounded_check",
    "substitute_exp",
    "substitute_one_plus",
    "element_from_json",
    "BUILTINS",
]


class _PochhammerTable:
    """Memo table for ``(q)_n``; reads are lock-free, fills are serialized."""

    def __init__(self):
        self._table = [LaurentPoly.constant(1)]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> LaurentPoly:
        if n < 0:
            raise ValueError("pochhammer index must be nonnegative")
        table = self._table
        if n < len(table):
            return table[n]
        with self._lock:
            while len(self._table) <= n:
                k = len(self._table)
                prev = self._table[-1]
                self._table.append(prev - prev.shift(k))
            return self._table[n]


pochhammer = _PochhammerTable()


def pochhammer_inverse(n: int) -> LaurentPoly:
    """``(q^{-1})_n = (1 - q^{-1}) ... (1 - q^{-n})``."""
    return pochhammer(n).invert_variable()


@dataclass(frozen=True)
class HabiroElement:
    """A rule producing ``f_n(q)``.

    ``kind`` is ``"builtin"``, ``"explicit"`` or ``"qholonomic"``.  Explicit
    term lists are finite; indices past the end are zero.
    """

    kind: str
    name: str = ""
    terms: tuple[LaurentPoly, ...] = ()
    recurrence: object = None
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def builtin(cls, name: str) -> "HabiroElement":
        if name not in BUILTINS:
            raise ValueError(f"unknown builtin element {name!r}; choose from {sorted(BUILTINS)}")
        return cls("builtin", name=name)

    @classmethod
    def explicit(cls, terms: Sequence[LaurentPoly | str]) -> "HabiroElement":
        polys = tuple(parse_laurent(t) if isinstance(t, str) else t for t in terms)
        return cls("explicit", terms=polys)

    @classmethod
    def from_recurrence(cls, rec) -> "HabiroElement":
        return cls("qholonomic", recurrence=rec)

    @property
    def summand_valuation(self) -> int:
        """Lower bound, per unit of n, on the valuation of the n-th summand at q = 1."""
        return 2 if (self.kind == "builtin" and self.name == "fig8") else 1

    def n_stop(self, N: int) -> int:
        v = self.summand_valuation
        return -(-N // v)

    def term(self, n: int) -> LaurentPoly:
        if n < 0:
            raise ValueError("negative index")
        if self.kind == "builtin":
            return BUILTINS[self.name](n)
        if self.kind == "explicit":
            return self.terms[n] if n < len(self.terms) else LaurentPoly()
        return self._recurrence_terms(n)[n]

    def _recurrence_terms(self, n: int) -> list[LaurentPoly]:
        from .qholonomic import advance

        cached = self._memo.get("terms")
        if cached is None or len(cached) <= n:
            cached = advance(self.recurrence, max(n, 2 * len(cached or ()) ))
            self._memo["terms"] = cached
        return cached

    def summands(self, n_max: int) -> list[LaurentPoly]:
        """``f_n(q) (q)_n`` for ``0 <= n <= n_max``."""
        if self.kind == "builtin" and self.name == "fig8":
            # (q)_n (q^-1)_n grows by the factor 2 - q^n - q^-n
            out = [LaurentPoly.constant(1)]
            for n in range(1, n_max + 1):
                s = out[-1]
                out.append(2 * s - s.shift(n) - s.shift(-n))
            return out
        if self.kind == "builtin" and self.name == "trefoil":
            return [pochhammer(n) for n in range(n_max + 1)]
        if self.kind == "explicit":
            n_max = min(n_max, len(self.terms) - 1)
        return [self.term(n) * pochhammer(n) for n in range(n_max + 1)]

    def partial_sum(self, n_max: int) -> LaurentPoly:
        acc: dict[int, object] = {}
        for s in self.summands(n_max):
            for e, c in s.items():
                acc[e] = acc.get(e, 0) + c
        return LaurentPoly(acc)


BUILTINS: dict[str, Callable[[int], LaurentPoly]] = {
    "trefoil": lambda n: LaurentPoly.constant(1),
    "fig8": pochhammer_inverse,
    "habiro_one": lambda n: LaurentPoly.monomial(n + 1, -1),
}


# -- substitutions ------------------------------------------------------------


def substitute_exp(poly: LaurentPoly, N: int) -> Fps:
    """Expand ``poly(e^u)`` to order N.

    Each monomial ``q^j`` becomes ``e^{j u}`` and the results are summed;
    coefficient n is ``(sum_j c_j j^n) / n!``, accumulated as power sums.
    """
    totals = [0] * (N + 1)
    for j, c in poly.items():
        pw = c
        totals[0] += pw
        for n in range(1, N + 1):
            pw *= j
            if not pw:
                break
            totals[n] += pw
    return Fps([Fraction(t) / factorial(n) for n, t in enumerate(totals)], "inv_x")


def substitute_one_plus(poly: LaurentPoly, N: int) -> Fps:
    """Expand ``poly(1 + u)`` to order N with generalized binomials.

    ``(1+u)^j = sum_k C(j, k) u^k`` holds for negative ``j`` too, where it
    agrees with the geometric inversion of ``1 + u``.
    """
    totals = [0] * (N + 1)
    for j, c in poly.items():
        b = 1
        for k in range(N + 1):
            if k:
                b = b * (j - k + 1) // k
                if not b:
                    break
            totals[k] += c * b
    return Fps(totals, "inv_x")


def taylor_T(phi: HabiroElement, N: int, n_stop: int | None = None) -> Fps:
    """Coefficients of ``x^0 .. x^-N`` of ``phi(e^{1/x})``."""
    if N < 0:
        raise ValueError("order must be nonnegative")
    stop = phi.n_stop(N) if n_stop is None else n_stop
    return substitute_exp(phi.partial_sum(stop), N)


def taylor_TZ(phi: HabiroElement, N: int, n_stop: int | None = None) -> Fps:
    """Coefficients of ``(1/x)^0 .. (1/x)^N`` of ``phi(1 + 1/x)``."""
    if N < 0:
        raise ValueError("order must be nonnegative")
    stop = phi.n_stop(N) if n_stop is None else n_stop
    return substitute_one_plus(phi.partial_sum(stop), N)


# -- nicely-bounded diagnostic -------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    n_max: int
    cprime_observed: Fraction
    c_observed: float
    cprime_threshold: Fraction
    c_threshold: float

    @property
    def passed(self) -> bool:
        return self.cprime_observed <= self.cprime_threshold and self.c_observed <= self.c_threshold

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "cprime_observed": str(self.cprime_observed),
            "c_observed": self.c_observed,
            "pass": self.passed,
        }


def _log_rational(c) -> float:
    c = Fraction(c)
    return math.log(c.numerator) - math.log(c.denominator)


def nicely_bounded_check(
    phi: HabiroElement, n_max: int, cprime_threshold, c_threshold: float
) -> BoundReport:
    """Observed suprema of ``max|span|/n^2`` and ``||f_n||_1^{1/n}`` over ``1 <= n <= n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    cprime = Fraction(0)
    c_obs = 0.0
    for n in range(1, n_max + 1):
        f = phi.term(n)
        sp = span(f)
        if sp is None:
            continue
        cprime = max(cprime, Fraction(max(abs(sp[0]), abs(sp[1])), n * n))
        c_obs = max(c_obs, math.exp(_log_rational(l1_norm(f)) / n))
    return BoundReport(n_max, cprime, c_obs, Fraction(cprime_threshold), float(c_threshold))


def element_from_json(obj: dict) -> HabiroElement:
    kind = obj.get("kind")
    if kind == "builtin":
        return HabiroElement.builtin(obj["name"])
    if kind == "explicit":
        return HabiroElement.explicit(obj["terms"])
    if kind == "qholonomic":
        from .qholonomic import parse_recurrence

        return HabiroElement.from_recurrence(parse_recurrence(obj))
    raise ValueError(f"unknown Habiro element kind {kind!r}")
