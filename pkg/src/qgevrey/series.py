"""Truncated formal power series with exact rational coefficients.

A :class:`Fps` stores ``a_0 .. a_N`` for a small variable ``u``; the tag says
whether ``u`` stands for ``1/x`` (``"inv_x"``), for the Borel variable
(``"p"``) or for nothing in particular (``"generic"``).  Binary operations
require equal tags and truncate to the smaller order.
"""

from __future__ import annotations

import csv
import io
from decimal import Context, Decimal
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .exact import as_rational

__all__ = [
    "Fps",
    "VarTagMismatch",
    "ValuationError",
    "fps_add",
    "fps_mul",
    "fps_exp",
    "fps_log1p",
    "fps_sqrt1p",
    "fps_inverse",
    "fps_compose",
    "fps_derive_in_x",
    "exp_series",
    "decimal_approx",
    "coeffs_to_csv",
]

VAR_TAGS = ("inv_x", "p", "generic")


class VarTagMismatch(ValueError):
    pass


class ValuationError(ValueError):
    """Raised when an operation needs a series with zero constant term."""


class Fps:
    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs: Iterable, var: str = "generic"):
        if var not in VAR_TAGS:
            raise ValueError(f"unknown variable tag {var!r}")
        cs = tuple(as_rational(c) for c in coeffs)
        if not cs:
            raise ValueError("a series needs at least one coefficient")
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("Fps is immutable")

    @classmethod
    def zero(cls, order: int, var: str = "generic") -> "Fps":
        return cls([0] * (order + 1), var)

    @classmethod
    def constant(cls, c, order: int, var: str = "generic") -> "Fps":
        return cls([c] + [0] * order, var)

    @classmethod
    def variable(cls, order: int, var: str = "generic") -> "Fps":
        """The series ``u`` itself."""
        cs = [0] * (order + 1)
        if order >= 1:
            cs[1] = 1
        return cls(cs, var)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def truncate(self, order: int) -> "Fps":
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return Fps(self.coeffs[: order + 1], self.var)

    def retag(self, var: str) -> "Fps":
        return Fps(self.coeffs, var)

    def __eq__(self, other):
        if not isinstance(other, Fps):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"Fps([{shown}{more}], var={self.var!r}, order={self.order})"

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: "Fps") -> int:
        if self.var != other.var:
            raise VarTagMismatch(f"{self.var!r} vs {other.var!r}")
        return min(self.order, other.order)

    def _lift(self, other):
        if isinstance(other, Fps):
            return other
        return Fps.constant(other, self.order, self.var)

    def __add__(self, other):
        if not isinstance(other, (Fps, int, Fraction)):
            return NotImplemented
        other = self._lift(other)
        n = self._check(other)
        return Fps([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return Fps([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        if not isinstance(other, (Fps, int, Fraction)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Fps([c * other for c in self.coeffs], self.var)
        if not isinstance(other, Fps):
            return NotImplemented
        n = self._check(other)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            s = 0
            for i in range(k + 1):
                ai = a[i]
                if ai:
                    bk = b[k - i]
                    if bk:
                        s += ai * bk
            out.append(s)
        return Fps(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Fps.constant(1, self.order, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "Fps":
        """Multiply by ``u^k`` (k >= 0), keeping the order."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        cs = ([0] * k + list(self.coeffs))[: len(self.coeffs)]
        return Fps(cs, self.var)

    def flip(self) -> "Fps":
        """Substitute ``u -> -u``."""
        return Fps([c if n % 2 == 0 else -c for n, c in enumerate(self.coeffs)], self.var)

    def evaluate(self, u):
        s = 0
        for c in reversed(self.coeffs):
            s = s * u + c
        return s

    def floats(self) -> list[float]:
        return [float(Fraction(c)) for c in self.coeffs]


def fps_add(a: Fps, b: Fps) -> Fps:
    return a + b


def fps_mul(a: Fps, b: Fps) -> Fps:
    return a * b


def _require_valuation_one(a: Fps, what: str) -> None:
    if a.coeffs[0]:
        raise ValuationError(f"{what} needs a series with zero constant term")


def fps_exp(a: Fps) -> Fps:
    """``exp(a)``, from the recurrence ``n e_n = sum_k k a_k e_{n-k}``."""
    _require_valuation_one(a, "exp")
    N = a.order
    e = [Fraction(1)] + [Fraction(0)] * N
    for n in range(1, N + 1):
        s = 0
        for k in range(1, n + 1):
            if a.coeffs[k]:
                s += k * a.coeffs[k] * e[n - k]
        e[n] = Fraction(s) / n
    return Fps(e, a.var)


def fps_log1p(a: Fps) -> Fps:
    """``log(1 + a)`` via ``(1 + a) L' = a'``."""
    _require_valuation_one(a, "log1p")
    N = a.order
    L = [Fraction(0)] * (N + 1)
    for n in range(1, N + 1):
        s = n * a.coeffs[n]
        for k in range(1, n):
            if a.coeffs[n - k]:
                s -= k * L[k] * a.coeffs[n - k]
        L[n] = Fraction(s) / n
    return Fps(L, a.var)


def fps_sqrt1p(a: Fps) -> Fps:
    """The square root of ``1 + a`` with constant term 1."""
    _require_valuation_one(a, "sqrt1p")
    N = a.order
    s = [Fraction(1)] + [Fraction(0)] * N
    for n in range(1, N + 1):
        acc = a.coeffs[n] - sum(s[k] * s[n - k] for k in range(1, n))
        s[n] = Fraction(acc) / 2
    return Fps(s, a.var)


def fps_inverse(a: Fps) -> Fps:
    """Multiplicative inverse; the constant term must be nonzero."""
    c0 = Fraction(a.coeffs[0])
    if not c0:
        raise ValuationError("inverse needs a nonzero constant term")
    N = a.order
    b = [1 / c0] + [Fraction(0)] * N
    for n in range(1, N + 1):
        s = sum(a.coeffs[k] * b[n - k] for k in range(1, n + 1) if a.coeffs[k])
        b[n] = -s / c0
    return Fps(b, a.var)


def fps_compose(outer: Fps, inner: Fps) -> Fps:
    """``outer(inner(u))`` by Horner's rule; result carries ``inner``'s tag."""
    _require_valuation_one(inner, "composition")
    N = min(outer.order, inner.order)
    inner = inner.truncate(N)
    result = Fps.constant(outer.coeffs[N], N, inner.var)
    for k in range(N - 1, -1, -1):
        result = result * inner + outer.coeffs[k]
    return result


def fps_derive_in_x(a: Fps) -> Fps:
    """d/dx of ``sum a_n x^-n``: coefficient n of the result is ``-(n-1) a_{n-1}``."""
    if a.var != "inv_x":
        raise VarTagMismatch("derivative in x needs an 'inv_x' series")
    out = [0] + [-(n - 1) * a.coeffs[n - 1] for n in range(1, a.order + 1)]
    return Fps(out, "inv_x")


def exp_series(j: int, N: int, var: str = "inv_x") -> Fps:
    """``e^{j u} = sum j^n/n! u^n`` truncated at order N."""
    return Fps([Fraction(j**n, factorial(n)) for n in range(N + 1)], var)


_DEC = Context(prec=17)


def decimal_approx(c) -> str:
    """17 significant digits, correctly rounded, without float overflow."""
    c = Fraction(c)
    if not c:
        return "0"
    d = _DEC.divide(Decimal(c.numerator), Decimal(c.denominator))
    return format(d, ".17g")


def coeffs_to_csv(coeffs: Sequence, start: int = 0) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "numerator", "denominator", "decimal_approx"])
    for n, c in enumerate(coeffs, start):
        c = Fraction(c)
        w.writerow([n, c.numerator, c.denominator, decimal_approx(c)])
    return buf.getvalue()
