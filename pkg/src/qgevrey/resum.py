"""Borel-Pade-Laplace resummation.

The Borel transform is replaced by its exact [m/m] Pade approximant, whose
poles stand in for the singularities of the continued function.  The
Laplace integral is taken along the ray ``arg p = theta`` with composite
Gauss-Legendre panels; the median sum averages the rays at ``+theta`` and
``-theta``, which for a simple pole on the positive axis is the principal
value.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .gevrey import borel
from .series import Fps

__all__ = [
    "RationalFunction",
    "PoleSet",
    "ResumResult",
    "PoleOnRay",
    "NonconvergentQuadrature",
    "DegenerateSeries",
    "pade",
    "poles",
    "laplace_ray",
    "median_sum",
    "resum_series",
    "DEFAULT_THETA",
]

DEFAULT_THETA = math.pi / 18
ROOT_TOL = 1e-12
ROOT_DPS = 60
RAY_ANGLE_TOL = 1e-8
QUAD_RTOL = 1e-11
EXP_CUTOFF = 1e-18
GL_NODES = 20
MAX_PANELS = 1 << 14


class DegenerateSeries(ValueError):
    pass


class PoleOnRay(ValueError):
    pass


class NonconvergentQuadrature(ArithmeticError):
    pass


def _trim(cs: list) -> list:
    while len(cs) > 1 and not cs[-1]:
        cs.pop()
    return cs


@dataclass(frozen=True)
class RationalFunction:
    """``num(p)/den(p)`` with ascending exact coefficients and ``den(0) = 1``."""

    num: tuple
    den: tuple

    def __post_init__(self):
        if Fraction(self.den[0]) != 1:
            raise ValueError("denominator must be normalized to den(0) = 1")

    @property
    def deg_num(self) -> int:
        return len(self.num) - 1

    @property
    def deg_den(self) -> int:
        return len(self.den) - 1

    def taylor(self, order: int) -> list[Fraction]:
        """Exact expansion at p = 0."""
        out = []
        for n in range(order + 1):
            s = Fraction(self.num[n]) if n < len(self.num) else Fraction(0)
            for k in range(1, min(n, self.deg_den) + 1):
                s -= self.den[k] * out[n - k]
            out.append(s)
        return out

    def _float_coeffs(self):
        num = np.array([float(Fraction(c)) for c in self.num][::-1])
        den = np.array([float(Fraction(c)) for c in self.den][::-1])
        return num, den

    def __call__(self, p):
        num, den = self._float_coeffs()
        return np.polyval(num, p) / np.polyval(den, p)

    def to_json(self) -> dict:
        return {"num": [str(c) for c in self.num], "den": [str(c) for c in self.den]}


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination over Q; ``None`` when singular."""
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pr = M[col]
        inv = 1 / pr[col]
        for r in range(col + 1, n):
            f = M[r][col]
            if f:
                f *= inv
                row = M[r]
                for c in range(col, n + 1):
                    if pr[c]:
                        row[c] -= f * pr[c]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = M[i][n] - sum(M[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / M[i][i]
    return x


def pade(g: Fps, m: int) -> RationalFunction:
    """Exact [m/m] Pade approximant of ``g``, lowering m while the system is singular."""
    if len(g.coeffs) < 2 * m + 1:
        raise ValueError(f"[{m}/{m}] needs {2 * m + 1} coefficients, series has {len(g.coeffs)}")
    c = [Fraction(x) for x in g.coeffs]
    if not any(c[: 2 * m + 1]):
        raise DegenerateSeries("cannot build a Pade approximant of the zero series")
    for mm in range(m, -1, -1):
        if mm == 0:
            q = [Fraction(1)]
        else:
            # sum_{j=0}^{mm} q_j c_{k-j} = 0 for k = mm+1 .. 2mm, with q_0 = 1
            A = [[c[k - j] if k >= j else Fraction(0) for j in range(1, mm + 1)] for k in range(mm + 1, 2 * mm + 1)]
            rhs = [-c[k] for k in range(mm + 1, 2 * mm + 1)]
            sol = _solve_exact(A, rhs)
            if sol is None:
                continue
            q = [Fraction(1)] + sol
        p = [sum((q[j] * c[k - j] for j in range(min(k, mm) + 1)), Fraction(0)) for k in range(mm + 1)]
        return RationalFunction(tuple(_trim(p)), tuple(_trim(q)))


@dataclass(frozen=True)
class PoleSet:
    poles: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    residuals: tuple[float, ...]

    def smallest(self) -> complex:
        if not self.poles:
            raise ValueError("no poles")
        return min(self.poles, key=abs)

    def to_json(self) -> dict:
        return {
            "poles": [{"re": z.real, "im": z.imag} for z in self.poles],
            "multiplicities": list(self.multiplicities),
            "residuals": list(self.residuals),
        }

    def to_csv(self) -> str:
        return "".join("%.17g %.17g\n" % (z.real, z.imag) for z in self.poles)


def _aberth(coeffs: list[Fraction], guesses, dps: int = ROOT_DPS, max_iter: int = 500) -> list:
    """Polish all roots at once (Aberth-Ehrlich) against the exact coefficients."""
    with mpmath.workdps(dps):
        c = [mpmath.mpf(x.numerator) / x.denominator for x in coeffs]  # ascending
        dc = [k * c[k] for k in range(1, len(c))]
        rc, rdc = c[::-1], dc[::-1]
        z = [mpmath.mpc(g) for g in guesses]
        # separate coincident starting points
        for i in range(len(z)):
            for j in range(i):
                if abs(z[i] - z[j]) < mpmath.mpf(10) ** (-12) * (1 + abs(z[i])):
                    z[i] += mpmath.mpc(1e-7 * (1 + abs(z[i])), 1e-7 * (i + 1))
        tol = mpmath.mpf(10) ** (-(dps // 2))
        active = set(range(len(z)))
        for _ in range(max_iter):
            if not active:
                break
            for k in sorted(active):
                zk = z[k]
                f = mpmath.polyval(rc, zk)
                if f == 0:
                    active.discard(k)
                    continue
                df = mpmath.polyval(rdc, zk)
                w = f / df if df != 0 else mpmath.mpc(tol)
                s = mpmath.fsum(1 / (zk - z[j]) for j in range(len(z)) if j != k)
                step = w / (1 - w * s)
                z[k] = zk - step
                if abs(step) <= tol * (1 + abs(z[k])):
                    active.discard(k)
        residuals = []
        absc = [abs(x) for x in c]
        for zk in z:
            scale = mpmath.polyval(absc[::-1], abs(zk))
            residuals.append(float(abs(mpmath.polyval(rc, zk)) / scale))
        return [complex(zk) for zk in z], residuals


def poles(rf: RationalFunction) -> PoleSet:
    """Roots of the denominator.

    Companion-matrix eigenvalues in double precision seed a simultaneous
    Aberth iteration run in extended precision on the exact coefficients;
    clustered roots of high-order Pade denominators are ill-conditioned at
    double precision.
    """
    if rf.deg_den < 1:
        return PoleSet((), (), ())
    exact = [Fraction(c) for c in rf.den]
    desc = np.array([float(c) for c in exact][::-1])
    roots, residuals = _aberth(exact, np.roots(desc))
    order = sorted(range(len(roots)), key=lambda i: (abs(roots[i]), roots[i].imag))
    # cluster near-coincident roots into one pole with multiplicity
    pts, mult, res = [], [], []
    for i in order:
        z = roots[i]
        for g, p in enumerate(pts):
            if abs(p - z) <= 1e-6 * max(1.0, abs(z)):
                mult[g] += 1
                res[g] = max(res[g], residuals[i])
                break
        else:
            pts.append(z)
            mult.append(1)
            res.append(residuals[i])
    return PoleSet(tuple(pts), tuple(mult), tuple(res))


@dataclass(frozen=True)
class ResumResult:
    value: complex
    ray_angle: float
    error_estimate: float
    constant_readded: Fraction | int = 0
    details: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "value": {"re": self.value.real, "im": self.value.imag},
            "ray_angle": self.ray_angle,
            "error_estimate": self.error_estimate,
            "constant_readded": str(self.constant_readded),
        }


_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_NODES)


@lru_cache(maxsize=128)
def _cached_poles(rf: RationalFunction) -> PoleSet:
    return poles(rf)


def _check_ray(rf: RationalFunction, theta: float) -> None:
    for z in _cached_poles(rf).poles:
        if abs(z) == 0:
            continue
        d = abs(math.remainder(cmath.phase(z) - theta, 2 * math.pi))
        if d < RAY_ANGLE_TOL:
            raise PoleOnRay(f"pole {z} lies on the ray arg p = {theta}")


def _laplace(rf: RationalFunction, x: float, theta: float) -> tuple[complex, float]:
    if x * math.cos(theta) <= 0:
        raise ValueError("need x*cos(theta) > 0")
    _check_ray(rf, theta)
    w = cmath.exp(1j * theta)
    T = -math.log(EXP_CUTOFF) / (x * math.cos(theta))
    num, den = rf._float_coeffs()

    def integrate(panels: int) -> complex:
        h = T / panels
        mid = (np.arange(panels) + 0.5) * h
        p = w * (mid[:, None] + 0.5 * h * _GL_X[None, :])
        vals = np.exp(-x * p) * np.polyval(num, p) / np.polyval(den, p)
        per_panel = vals @ _GL_W
        # cumsum fixes the accumulation order to ascending panel index
        return complex(np.cumsum(per_panel)[-1]) * 0.5 * h * w

    panels = 16
    prev = integrate(panels)
    while panels < MAX_PANELS:
        panels *= 2
        cur = integrate(panels)
        change = abs(cur - prev)
        if change <= QUAD_RTOL * max(abs(cur), 1e-300):
            return cur, change
        prev = cur
    raise NonconvergentQuadrature(f"no convergence with {panels} panels")


def laplace_ray(rf: RationalFunction, x: float, theta: float = 0.0) -> complex:
    """``int_0^inf exp(-x e^{i theta} t) rf(e^{i theta} t) e^{i theta} dt``."""
    return _laplace(rf, x, theta)[0]


def median_sum(rf: RationalFunction, x: float, theta: float = DEFAULT_THETA) -> ResumResult:
    up, e_up = _laplace(rf, x, theta)
    down, e_down = _laplace(rf, x, -theta)
    value = 0.5 * (up + down)
    err = max(e_up, e_down, abs(value.imag))
    return ResumResult(value, theta, err, 0, {"upper": up, "lower": down})


def resum_series(
    f: Fps,
    x: float,
    m: int | None = None,
    theta: float = DEFAULT_THETA,
    median: bool = False,
) -> ResumResult:
    """``a_0`` plus the Laplace sum of the Pade model of ``borel(f)``.

    With ``m`` omitted the largest order the series supports is tried first,
    stepping down while the approximant has a pole on the integration ray;
    an explicit ``m`` is used as given.
    """
    g, a0 = borel(f)
    if not any(g.coeffs):
        return ResumResult(complex(float(Fraction(a0))), theta, 0.0, a0)
    m_max = (len(g.coeffs) - 1) // 2
    candidates = range(m_max, 0, -1) if m is None else [min(m, m_max)]
    last_exc = None
    for mm in candidates:
        rf = pade(g, mm)
        try:
            if median:
                r = median_sum(rf, x, theta)
                value, err = r.value, r.error_estimate
            else:
                value, err = _laplace(rf, x, theta)
        except PoleOnRay as exc:
            last_exc = exc
            continue
        details = {"m": mm, "pade": rf}
        return ResumResult(value + float(Fraction(a0)), theta, err, a0, details)
    raise last_exc
