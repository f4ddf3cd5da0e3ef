"""Gevrey growth diagnostics and the Borel transform.

The fit model is ``log|a_n| ~ s log n! + n log C + beta log n + const``.
Differencing consecutive nonzero coefficients removes the constant; the
``beta`` column absorbs polynomial prefactors so that ``s`` and ``C`` come
out clean for series like ``n! n^{1/2} rho^-n``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import factorial, lgamma
from typing import Sequence

import numpy as np

from .series import Fps, VarTagMismatch

__all__ = [
    "GevreyReport",
    "InsufficientData",
    "gevrey_fit",
    "borel",
    "inverse_borel",
    "borel_radius",
    "log_abs",
]

DEFAULT_MIN_USED = 10
DEFAULT_SKIP = 10
RADIUS_INFINITE = 1e6


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class GevreyReport:
    s_hat: float
    log_c_hat: float
    n_used: int
    residual: float
    min_used: int = DEFAULT_MIN_USED

    @property
    def reliable(self) -> bool:
        return self.n_used >= self.min_used

    @property
    def c_hat(self) -> float:
        return math.exp(self.log_c_hat)

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("min_used")
        return d


def log_abs(c) -> float:
    """``log|c|`` for an exact rational of any size."""
    c = Fraction(c)
    return math.log(abs(c.numerator)) - math.log(c.denominator)


def gevrey_fit(
    coeffs: Sequence,
    *,
    skip: int = DEFAULT_SKIP,
    prefactor: bool = True,
    min_used: int = DEFAULT_MIN_USED,
) -> GevreyReport:
    """Estimate the Gevrey order ``s`` and constant ``C`` of ``a_n``.

    Coefficients with index below ``skip`` are ignored as long as at least
    ``min_used`` nonzero ones remain; zeros are skipped and a pair spanning a
    gap of g indices is divided by g.
    """
    coeffs = list(coeffs)
    nz = [n for n, c in enumerate(coeffs) if c and n >= 1]
    if not nz:
        if any(coeffs):
            raise InsufficientData("need at least 2 nonzero coefficients")
        raise InsufficientData("all coefficients are zero")
    tail = [n for n in nz if n >= skip]
    idx = tail if len(tail) >= min_used else nz
    if len(idx) < 2:
        raise InsufficientData("need at least 2 nonzero coefficients")

    rows, ys = [], []
    for n0, n1 in zip(idx, idx[1:]):
        g = n1 - n0
        row = [(lgamma(n1 + 1) - lgamma(n0 + 1)) / g, 1.0]
        if prefactor:
            row.append((math.log(n1) - math.log(n0)) / g)
        rows.append(row)
        ys.append((log_abs(coeffs[n1]) - log_abs(coeffs[n0])) / g)
    X = np.array(rows)
    y = np.array(ys)
    if prefactor and len(ys) < 4:
        X = X[:, :2]
    sol, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ sol
    rms = float(np.sqrt(np.mean(resid**2)))
    return GevreyReport(float(sol[0]), float(sol[1]), len(idx), rms, min_used)


def borel(f: Fps) -> tuple[Fps, Fraction | int]:
    """``G(p) = sum_{n>=1} a_n p^{n-1}/(n-1)!``; returns ``(G, a_0)``."""
    if f.var != "inv_x":
        raise VarTagMismatch("Borel transform needs an 'inv_x' series")
    if f.order == 0:
        return Fps.zero(0, "p"), f[0]
    g = [Fraction(f[n], factorial(n - 1)) for n in range(1, f.order + 1)]
    return Fps(g, "p"), f[0]


def inverse_borel(g: Fps, a0=0) -> Fps:
    if g.var != "p":
        raise VarTagMismatch("inverse Borel transform needs a 'p' series")
    return Fps([a0] + [g[k] * factorial(k) for k in range(g.order + 1)], "inv_x")


def borel_radius(g: Fps, *, min_terms: int = 10) -> float:
    """Radius of convergence ``1/limsup |g_n|^{1/n}``.

    Fits ``-log|g_n| / n = log R + beta log(n)/n + c/n - gamma log n`` on the
    upper half of the nonzero indices with weights growing like n.  A
    clearly positive ``gamma`` means super-exponential decay; that and
    estimates above 1e6 return ``inf``.
    """
    nz = [n for n, c in enumerate(g.coeffs) if c and n >= 1]
    if len(nz) < min_terms:
        raise InsufficientData(f"need at least {min_terms} nonzero coefficients beyond g_0")
    tail = nz[len(nz) // 2:]
    if len(tail) < min_terms:
        tail = nz[-min_terms:]
    n = np.array(tail, dtype=float)
    y = np.array([-log_abs(g.coeffs[k]) for k in tail]) / n
    w = n
    X = np.vstack([np.ones_like(n), np.log(n) / n, 1.0 / n, np.log(n)]).T
    sol, *_ = np.linalg.lstsq(X * w[:, None], y * w, rcond=None)
    if sol[3] > 0.5:
        return math.inf
    sol, *_ = np.linalg.lstsq(X[:, :3] * w[:, None], y * w, rcond=None)
    if sol[0] > math.log(RADIUS_INFINITE):
        return math.inf
    return float(math.exp(sol[0]))
