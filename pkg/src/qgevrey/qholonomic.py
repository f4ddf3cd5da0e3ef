"""Linear q-difference equations with coefficients in ``Q[u^±1, q^±1]``.

A recurrence of order d reads

    a_d(q^n, q) f_{n+d}(q) + ... + a_0(q^n, q) f_n(q) = 0

and is stepped forward with exact Laurent division; a nonzero remainder
means the solution has left the Laurent ring.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .exact import LaurentPoly, ParseError, _Cursor, as_rational, exact_quotient, format_rational, parse_laurent

__all__ = [
    "BiLaurent",
    "parse_bilaurent",
    "QRecurrence",
    "RecurrenceError",
    "NonPolynomialStep",
    "ZeroLeadingCoefficient",
    "parse_recurrence",
    "advance",
    "verify_solution",
    "builtin_recurrences",
]


class RecurrenceError(ValueError):
    pass


class NonPolynomialStep(RecurrenceError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"step to index {n} leaves the Laurent polynomial ring")


class ZeroLeadingCoefficient(RecurrenceError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"leading coefficient vanishes at u = q^{n}")


class BiLaurent:
    """Laurent polynomial in ``u`` and ``q``, stored as ``{(i, j): c}`` for ``c u^i q^j``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, c in (terms or {}).items():
            c = as_rational(c)
            if c:
                clean[(int(k[0]), int(k[1]))] = c
        self.terms = clean

    @classmethod
    def const(cls, c) -> "BiLaurent":
        return cls({(0, 0): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, BiLaurent) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "BiLaurent") -> "BiLaurent":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BiLaurent(out)

    def __neg__(self):
        return BiLaurent({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "BiLaurent") -> "BiLaurent":
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return BiLaurent(out)

    def __pow__(self, k: int) -> "BiLaurent":
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("negative power of a non-monomial")
            ((i, j), c), = self.terms.items()
            return BiLaurent({(i * k, j * k): Fraction(1) / Fraction(c) ** (-k)})
        out = BiLaurent.const(1)
        for _ in range(k):
            out = out * self
        return out

    def at(self, n: int) -> LaurentPoly:
        """Substitute ``u = q^n``."""
        out: dict[int, object] = {}
        for (i, j), c in self.terms.items():
            e = i * n + j
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items()):
            mono = "*".join(
                s for s in (
                    ("u" if i == 1 else f"u^{i}") if i else "",
                    ("q" if j == 1 else f"q^{j}") if j else "",
                ) if s
            )
            neg = c < 0
            mag = -c if neg else c
            if not mono:
                body = format_rational(mag)
            else:
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            sep = ("-" if neg else "") if not parts else (" - " if neg else " + ")
            parts.append(sep + body)
        return "".join(parts)

    def __repr__(self):
        return f"BiLaurent({str(self)!r})"


# Grammar (whitespace-insensitive):
#   expr   := ['+'|'-'] prod (('+'|'-') prod)*
#   prod   := power ('*' power)*
#   power  := atom ('^' int)?
#   atom   := int ('/' posint)? | 'q' | 'u' | '(' expr ')'


def _expr(cur: _Cursor) -> BiLaurent:
    neg = cur.eat("-")
    if not neg:
        cur.eat("+")
    acc = _prod(cur)
    if neg:
        acc = -acc
    while True:
        if cur.eat("+"):
            acc = acc + _prod(cur)
        elif cur.eat("-"):
            acc = acc - _prod(cur)
        else:
            return acc


def _prod(cur: _Cursor) -> BiLaurent:
    acc = _power(cur)
    while cur.eat("*"):
        acc = acc * _power(cur)
    return acc


def _power(cur: _Cursor) -> BiLaurent:
    base = _atom(cur)
    if cur.eat("^"):
        pos = cur.pos
        k = cur.signed_int()
        try:
            return base**k
        except ValueError as exc:
            raise ParseError(str(exc), cur.text, pos) from None
    return base


def _atom(cur: _Cursor) -> BiLaurent:
    ch = cur.peek()
    if ch == "q":
        cur.pos += 1
        return BiLaurent({(0, 1): 1})
    if ch == "u":
        cur.pos += 1
        return BiLaurent({(1, 0): 1})
    if ch == "(":
        cur.pos += 1
        inner = _expr(cur)
        cur.expect(")")
        return inner
    if ch.isdigit():
        num = cur.digits()
        if cur.eat("/"):
            den = cur.digits()
            if den == 0:
                cur.fail("zero denominator")
            return BiLaurent.const(Fraction(num, den))
        return BiLaurent.const(num)
    cur.fail("expected number, 'q', 'u' or '('")


def parse_bilaurent(text: str) -> BiLaurent:
    cur = _Cursor(text)
    out = _expr(cur)
    if not cur.at_end():
        cur.fail("unexpected input")
    return out


@dataclass(frozen=True)
class QRecurrence:
    coeffs: tuple[BiLaurent, ...]
    initial: tuple[LaurentPoly, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise RecurrenceError("a recurrence needs order >= 1")
        if not self.coeffs[-1]:
            raise RecurrenceError("leading coefficient a_d is identically zero")
        if len(self.initial) != self.order:
            raise RecurrenceError(f"expected {self.order} initial values, got {len(self.initial)}")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def to_json(self) -> dict:
        out = {
            "order": self.order,
            "coeffs": [str(a) for a in self.coeffs],
            "initial": [str(f) for f in self.initial],
        }
        if self.name:
            out["name"] = self.name
        return out


def parse_recurrence(spec: dict | str) -> QRecurrence:
    """Build a :class:`QRecurrence` from its JSON form.

    ``coeffs`` lists ``a_0 .. a_d`` as strings in ``u`` and ``q``; ``order``
    is optional but checked when present.
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    try:
        raw_coeffs = spec["coeffs"]
        raw_init = spec["initial"]
    except KeyError as exc:
        raise RecurrenceError(f"missing field {exc.args[0]!r}") from None
    coeffs = tuple(parse_bilaurent(s) for s in raw_coeffs)
    order = spec.get("order", len(coeffs) - 1)
    if order != len(coeffs) - 1:
        raise RecurrenceError(f"order {order} does not match {len(coeffs)} coefficients")
    initial = tuple(parse_laurent(s) for s in raw_init)
    return QRecurrence(coeffs, initial, spec.get("name", ""))


def advance(rec: QRecurrence, n_max: int) -> list[LaurentPoly]:
    """Return ``f_0 .. f_{n_max}``."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    d = rec.order
    f = list(rec.initial[: n_max + 1])
    n = 0
    while len(f) <= n_max:
        lead = rec.coeffs[d].at(n)
        if not lead:
            raise ZeroLeadingCoefficient(n)
        rhs = LaurentPoly()
        for j in range(d):
            a = rec.coeffs[j].at(n)
            if a:
                rhs = rhs - a * f[n + j]
        nxt = exact_quotient(rhs, lead)
        if nxt is None:
            raise NonPolynomialStep(n + d)
        f.append(nxt)
        n += 1
    return f


def verify_solution(rec: QRecurrence, terms: Sequence[LaurentPoly]) -> bool:
    d = rec.order
    if len(terms) < d + 1:
        raise ValueError("need at least d+1 terms")
    for n in range(len(terms) - d):
        total = LaurentPoly()
        for j in range(d + 1):
            a = rec.coeffs[j].at(n)
            if a:
                total = total + a * terms[n + j]
        if total:
            return False
    return True


def builtin_recurrences() -> list[QRecurrence]:
    """The shipped corpus (``data/recurrences.json``)."""
    text = resources.files("qgevrey.data").joinpath("recurrences.json").read_text()
    return [parse_recurrence(obj) for obj in json.loads(text)]
