"""Change of variables between the ``q = e^{1/x}`` and ``q = 1 + 1/x`` expansions.

With ``b`` the coefficients of ``g(u) = f(e^u - 1)`` and ``a`` those of
``f``, the Stirling matrix gives

    a_n = sum_k (-1)^k (n-k)!/n! s_{n,n-k} b_{n-k},

which is composition with ``log(1 + u)``.  Since ``T = T^Z o (u -> e^u - 1)``
for Habiro elements, the matrix sends ``taylor_T`` coefficients to
``taylor_TZ`` coefficients; :func:`transform_a_to_b` is the inverse map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .gevrey import GevreyReport, gevrey_fit
from .series import Fps, fps_compose
from .specfun import stirling_first

__all__ = [
    "TransformMatrix",
    "transform_b_to_a",
    "transform_a_to_b",
    "compose_log1p",
    "compose_expm1",
    "gevrey_transfer_demo",
]


@dataclass(frozen=True)
class TransformMatrix:
    N: int
    entries: tuple[tuple[Fraction, ...], ...]  # entries[n][k] = m_{n,k}

    @classmethod
    def build(cls, N: int) -> "TransformMatrix":
        rows = []
        for n in range(N + 1):
            rows.append(tuple(
                Fraction((-1) ** k * factorial(n - k) * stirling_first(n, n - k), factorial(n))
                for k in range(n + 1)
            ))
        return cls(N, tuple(rows))

    def __getitem__(self, nk: tuple[int, int]) -> Fraction:
        n, k = nk
        return self.entries[n][k]


def _check_len(coeffs: Sequence, N: int) -> None:
    if len(coeffs) < N + 1:
        raise ValueError(f"need {N + 1} coefficients, got {len(coeffs)}")


def transform_b_to_a(b: Sequence, N: int) -> list[Fraction]:
    _check_len(b, N)
    M = TransformMatrix.build(N)
    return [sum((M[n, k] * b[n - k] for k in range(n + 1)), Fraction(0)) for n in range(N + 1)]


def transform_a_to_b(a: Sequence, N: int) -> list[Fraction]:
    """Invert :func:`transform_b_to_a` by forward substitution (unit diagonal)."""
    _check_len(a, N)
    M = TransformMatrix.build(N)
    b: list[Fraction] = []
    for n in range(N + 1):
        s = Fraction(a[n]) - sum((M[n, k] * b[n - k] for k in range(1, n + 1)), Fraction(0))
        b.append(s)
    return b


def compose_log1p(b: Sequence, N: int) -> list[Fraction]:
    """Coefficients of ``b(log(1 + u))`` through series composition."""
    inner = Fps([0] + [Fraction((-1) ** (k - 1), k) for k in range(1, N + 1)])
    return [Fraction(c) for c in fps_compose(Fps(list(b[: N + 1])), inner).coeffs]


def compose_expm1(a: Sequence, N: int) -> list[Fraction]:
    """Coefficients of ``a(e^u - 1)`` through series composition."""
    inner = Fps([0] + [Fraction(1, factorial(k)) for k in range(1, N + 1)])
    return [Fraction(c) for c in fps_compose(Fps(list(a[: N + 1])), inner).coeffs]


def gevrey_transfer_demo(b: Sequence, N: int, **fit_options) -> tuple[GevreyReport, GevreyReport]:
    """Gevrey fits of ``b`` and of its Stirling transform."""
    a = transform_b_to_a(b, N)
    return gevrey_fit(list(b[: N + 1]), **fit_options), gevrey_fit(a, **fit_options)
