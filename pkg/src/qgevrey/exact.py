"""Exact rationals and Laurent polynomials in one variable ``q``.

Coefficients are ``int`` or :class:`fractions.Fraction`; a Fraction with
denominator 1 is always stored as ``int`` so integer-only work stays fast.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Fraction",
    "LaurentPoly",
    "ParseError",
    "as_rational",
    "format_rational",
    "parse_laurent",
    "parse_rational",
    "l1_norm",
    "span",
    "eval_at_one",
    "exact_quotient",
]


class ParseError(ValueError):
    """Syntax error in a polynomial or rational literal."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos} in {text!r}")


def as_rational(c) -> int | Fraction:
    """Normalize a coefficient: exact rationals only, integral values as int."""
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return as_rational(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return parse_rational(c)
    raise TypeError(f"not an exact rational: {c!r}")


def format_rational(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def parse_rational(text: str) -> int | Fraction:
    s = text.strip()
    try:
        return as_rational(Fraction(s)) if "/" in s else int(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError("invalid rational", text, 0) from None


class LaurentPoly:
    """Immutable finite sum ``sum_j c_j q^j`` with exact coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = as_rational(c)
                if c:
                    clean[int(e)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        # trusted constructor: terms already normalized and zero-free
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exp: int, coeff=1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    # -- mapping-like access -------------------------------------------------
    @property
    def terms(self) -> dict[int, int | Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, int | Fraction]]:
        return iter(sorted(self._terms.items()))

    def __getitem__(self, exp: int):
        return self._terms.get(exp, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    # -- ring operations -----------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.constant(other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = as_rational(v) if isinstance(v, Fraction) else v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, object] = {}
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("negative power of a non-monomial")
            (e, c), = self._terms.items()
            return LaurentPoly({e * k: Fraction(1) / Fraction(c) ** (-k)})
        result = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q^k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def scale(self, c) -> "LaurentPoly":
        c = as_rational(c)
        if not c:
            return LaurentPoly()
        return LaurentPoly({e: v * c for e, v in self._terms.items()})

    def invert_variable(self) -> "LaurentPoly":
        """Substitute ``q -> q^-1``."""
        return LaurentPoly._raw({-e: c for e, c in self._terms.items()})

    def __call__(self, q):
        return sum(c * q**e for e, c in self._terms.items())

    # -- comparison / hashing ------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        try:
            return self._terms == LaurentPoly.constant(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- printing ------------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items()):
            neg = c < 0
            mag = -c if neg else c
            if e == 0:
                body = format_rational(mag)
            else:
                mono = "q" if e == 1 else f"q^{e}"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"


# -- parsing ----------------------------------------------------------------


class _Cursor:
    """Whitespace-skipping character cursor shared by the polynomial parsers."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str) -> None:
        if not self.eat(ch):
            self.fail(f"expected {ch!r}")

    def fail(self, message: str):
        self.skip()
        raise ParseError(message, self.text, self.pos)

    def at_end(self) -> bool:
        return self.peek() == ""

    def digits(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected digits")
        return int(self.text[start:self.pos])

    def signed_int(self) -> int:
        sign = -1 if self.eat("-") else 1
        if sign == 1:
            self.eat("+")
        return sign * self.digits()


def _parse_coeff(cur: _Cursor):
    num = cur.signed_int()
    if cur.eat("/"):
        den = cur.digits()
        if den == 0:
            cur.fail("zero denominator")
        return as_rational(Fraction(num, den))
    return num


def _parse_mono(cur: _Cursor) -> int:
    cur.expect("q")
    if cur.eat("^"):
        return cur.signed_int()
    return 1


def _parse_term(cur: _Cursor):
    if cur.peek() == "q":
        return 1, _parse_mono(cur)
    if cur.peek().isdigit() or cur.peek() == "-":
        c = _parse_coeff(cur)
        if cur.eat("*"):
            return c, _parse_mono(cur)
        return c, 0
    cur.fail("expected term")


def parse_laurent(text: str) -> LaurentPoly:
    """Parse ``term (('+'|'-') term)*`` into a :class:`LaurentPoly`.

    Terms are ``c``, ``c*q^j`` or ``q^j`` with ``c`` an optionally signed
    rational ``a`` or ``a/b``; a leading sign in front of a bare monomial is
    accepted so that printed output always re-parses.

    >>> str(parse_laurent("2 - q - q^-1"))
    '-q^-1 + 2 - q'
    """
    cur = _Cursor(text)
    out: dict[int, object] = {}
    sign = 1
    if cur.eat("-"):
        sign = -1
    elif cur.eat("+"):
        pass
    while True:
        c, e = _parse_term(cur)
        out[e] = out.get(e, 0) + sign * c
        if cur.at_end():
            break
        if cur.eat("+"):
            sign = 1
        elif cur.eat("-"):
            sign = -1
        else:
            cur.fail("expected '+' or '-'")
    return LaurentPoly(out)


# -- norms and spans ----------------------------------------------------------


def l1_norm(p: LaurentPoly) -> int | Fraction:
    return as_rational(sum(abs(c) for c in p._terms.values()))


def span(p: LaurentPoly) -> tuple[int, int] | None:
    """Smallest and largest exponent present, or ``None`` for the zero polynomial."""
    if not p._terms:
        return None
    return min(p._terms), max(p._terms)


def eval_at_one(p: LaurentPoly) -> int | Fraction:
    return as_rational(sum(p._terms.values()))


def exact_quotient(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly | None:
    """Return ``num/den`` if it is a Laurent polynomial, else ``None``.

    Units of the Laurent ring are monomials, so both sides are shifted to
    polynomials with nonzero constant term before long division.
    """
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    if not num:
        return LaurentPoly()
    dlo, dhi = span(den)
    if dlo == dhi:
        c = Fraction(den[dlo])
        return LaurentPoly({e - dlo: v / c for e, v in num._terms.items()})
    nlo, nhi = span(num)
    r = [Fraction(num[nlo + i]) for i in range(nhi - nlo + 1)]
    d = [den[dlo + i] for i in range(dhi - dlo + 1)]
    dd = len(d) - 1
    if len(r) - 1 < dd:
        return None
    lead = Fraction(d[-1])
    quot = [Fraction(0)] * (len(r) - dd)
    for i in range(len(r) - 1, dd - 1, -1):
        if not r[i]:
            continue
        f = r[i] / lead
        quot[i - dd] = f
        for j in range(dd + 1):
            r[i - dd + j] -= f * d[j]
    if any(r[:dd]):
        return None
    return LaurentPoly({nlo - dlo + i: c for i, c in enumerate(quot)})


def sum_polys(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    out: dict[int, object] = {}
    for p in polys:
        for e, c in p._terms.items():
            out[e] = out.get(e, 0) + c
    return LaurentPoly(out)
