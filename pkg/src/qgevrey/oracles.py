"""Independent closed-form references for the resummation pipeline.

These are built without any of the series machinery so they can serve as
oracles: ``e^x E_1(x)`` by its continued fraction and ``Ei(x)`` by its
convergent power series.
"""

from __future__ import annotations

import math

__all__ = ["exp_E1", "Ei", "EULER_GAMMA"]

EULER_GAMMA = 0.57721566490153286060651209008240243


def exp_E1(x: float, *, tol: float = 1e-16, max_iter: int = 10_000) -> float:
    """``e^x E_1(x)`` for ``x > 0``.

    Modified Lentz evaluation of
    ``1/(x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)))``.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    tiny = 1e-300
    b = x + 1.0
    f = 1.0 / b
    C = 1.0 / tiny
    D = 1.0 / b
    for k in range(1, max_iter):
        a = -float(k * k)
        b += 2.0
        D = b + a * D
        D = 1.0 / (D if D != 0 else tiny)
        C = b + a / C
        if C == 0:
            C = tiny
        delta = C * D
        f *= delta
        if abs(delta - 1.0) < tol:
            return f
    raise ArithmeticError("continued fraction did not converge")


def Ei(x: float, *, tol: float = 1e-17, max_terms: int = 10_000) -> float:
    """Exponential integral ``gamma + log x + sum x^k/(k k!)`` for ``x > 0``."""
    if x <= 0:
        raise ValueError("x must be positive")
    terms = [EULER_GAMMA, math.log(x)]
    t = 1.0
    for k in range(1, max_terms):
        t *= x / k
        term = t / k
        terms.append(term)
        if term < tol * abs(terms[1] + terms[0]) and k > x:
            return math.fsum(terms)
    raise ArithmeticError("series did not converge")
