"""Exact constants and closed-form cross-checks.

Bernoulli numbers (classical and modified), the series behind the nu-norm
bound, unsigned Stirling numbers of the first kind, the quadratic character
mod 12 with its L-series, the closed-form Taylor coefficients of the trefoil
Borel transform, and the diagram-counting factorial bounds.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .series import Fps, fps_exp, fps_inverse, fps_log1p, fps_sqrt1p

__all__ = [
    "BernoulliTable",
    "bernoulli",
    "modified_bernoulli",
    "nu_norm_check",
    "stirling_first",
    "chi",
    "L_chi",
    "L_chi_partial",
    "trefoil_H_coeff",
    "double_factorial",
    "stirling_window",
    "diagram_bounds",
]


@dataclass(frozen=True)
class BernoulliTable:
    classical: dict[int, Fraction]
    modified: dict[int, Fraction]

    def identity_holds(self, n: int) -> bool:
        """``b_{2n} == B_{2n} / (4n (2n)!)``, exactly."""
        return self.modified[2 * n] == Fraction(self.classical[2 * n], 4 * n * factorial(2 * n))

    def to_csv(self) -> str:
        rows = ["n,B_n,b_n"]
        for n in sorted(self.classical):
            b = self.modified.get(n)
            rows.append(f"{n},{_frac(self.classical[n])},{'' if b is None else _frac(b)}")
        return "\n".join(rows) + "\n"


def _frac(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def bernoulli(n_max: int) -> list[Fraction]:
    """``B_0 .. B_{n_max}`` from ``x/(e^x - 1)`` (so ``B_1 = -1/2``)."""
    # (e^x - 1)/x = sum x^k/(k+1)!
    denom = Fps([Fraction(1, factorial(k + 1)) for k in range(n_max + 1)])
    inv = fps_inverse(denom)
    return [Fraction(c) * factorial(n) for n, c in enumerate(inv.coeffs)]


def modified_bernoulli(n_max: int) -> BernoulliTable:
    """``b_{2n}`` for ``n <= n_max`` from ``(1/2) log(sinh(x/2)/(x/2))``."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    N = 2 * n_max
    shx = [Fraction(0)] * (N + 1)
    for k in range(n_max + 1):
        shx[2 * k] = Fraction(1, 4**k * factorial(2 * k + 1))
    shx[0] = 0
    half_log = fps_log1p(Fps(shx)) * Fraction(1, 2)
    modified = {2 * n: Fraction(half_log[2 * n]) for n in range(1, n_max + 1)}
    B = bernoulli(N)
    return BernoulliTable({n: B[n] for n in range(N + 1)}, modified)


def nu_norm_check(K: int) -> tuple[bool, Fps, Fps]:
    """Compare ``exp(sum |b_2n| x^-2n)`` with ``sqrt((1/(2x)) / sin(1/(2x)))`` to order K."""
    if K < 2 or K % 2:
        raise ValueError("K must be an even integer >= 2")
    table = modified_bernoulli(K // 2)
    s = [Fraction(0)] * (K + 1)
    for n in range(1, K // 2 + 1):
        s[2 * n] = abs(table.modified[2 * n])
    lhs = fps_exp(Fps(s, "inv_x"))
    # sin(u/2)/(u/2) = sum (-1)^k (u/2)^{2k} / (2k+1)!
    sinc = [Fraction(0)] * (K + 1)
    for k in range(K // 2 + 1):
        sinc[2 * k] = Fraction((-1) ** k, 4**k * factorial(2 * k + 1))
    ratio = fps_inverse(Fps(sinc, "inv_x"))
    rhs = fps_sqrt1p(ratio - 1)
    return lhs == rhs, lhs, rhs


_stirling_rows: list[list[int]] = [[1]]
_stirling_lock = threading.Lock()


def stirling_first(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind, ``s_{n+1,k} = s_{n,k-1} + n s_{n,k}``."""
    if not (0 <= k <= n):
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    rows = _stirling_rows
    if n >= len(rows):
        with _stirling_lock:
            while len(_stirling_rows) <= n:
                m = len(_stirling_rows) - 1
                prev = _stirling_rows[-1]
                row = [0] * (m + 2)
                for j in range(m + 2):
                    left = prev[j - 1] if j >= 1 else 0
                    here = prev[j] if j <= m else 0
                    row[j] = left + m * here
                _stirling_rows.append(row)
    return _stirling_rows[n][k]


def chi(n: int) -> int:
    r = n % 12
    if r in (1, 11):
        return 1
    if r in (5, 7):
        return -1
    return 0


def L_chi_partial(s: float, N: int) -> float:
    """``sum_{n<=N} chi(n) n^-s`` with a correctly rounded float sum."""
    n = np.arange(1, N + 1, dtype=float)
    signs = np.array([chi(k) for k in range(12)], dtype=float)[np.arange(1, N + 1) % 12]
    mask = signs != 0
    terms = signs[mask] * n[mask] ** (-float(s))
    return math.fsum(terms[::-1])


@lru_cache(maxsize=None)
def L_chi(s: int, N: int = 10**6) -> float:
    if s < 2:
        raise ValueError("s must be at least 2")
    return L_chi_partial(s, N)


def trefoil_H_coeff(k: int) -> float:
    """Taylor coefficient of ``p^k`` in ``54 sqrt3 pi sum chi(n) n (n^2 pi^2 - 6p)^{-5/2}``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    rising = 1.0
    for i in range(k):
        rising *= 2.5 + i
    return 54 * math.sqrt(3) * 6**k / factorial(k) * rising * math.pi ** (-(4 + 2 * k)) * L_chi(4 + 2 * k)


def double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def stirling_window(n: int) -> tuple[float, float]:
    """``sqrt(2 pi) n^{n+1/2} e^{-n + 1/(12n+r)}`` for r = 1 (lower) and r = 0 (upper)."""
    base = 0.5 * math.log(2 * math.pi) + (n + 0.5) * math.log(n) - n
    return math.exp(base + 1 / (12 * n + 1)), math.exp(base + 1 / (12 * n))


def diagram_bounds(n: int) -> tuple[int, tuple[float, float]]:
    """``(6n)!!`` and the two-sided Stirling window around ``n!``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return double_factorial(6 * n), stirling_window(n)
