"""Sharp vectorial Kato constant for p-harmonic maps.

The constant is the minimum over a in [0, 1] of the rational function

    f(a) = (a^2 (p-2)^2 + a (p^2-4) + 2n) / ((n-2) a + n),

which has a closed form with three regimes. ``kappa_oracle`` recovers the
same number by brute force (grid + golden section) and shares no code with
the closed form.
"""
from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class Regime(str, enum.Enum):
    FIRST = "FirstRegime"
    MIDDLE = "MiddleRegime"
    SATURATED = "Saturated"


@dataclass(frozen=True)
class KatoConstant:
    p: float
    n: int
    value: float
    regime: Regime
    a_star: float

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "value": self.value,
            "regime": self.regime.value,
            "a_star": self.a_star,
        }


def check_pn(p, n) -> tuple[float, int]:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        if isinstance(n, float) and n.is_integer():
            n = int(n)
        else:
            raise DomainError(f"n must be an integer, got {n!r}")
    p = float(p)
    if not p > 1.0 or not math.isfinite(p):
        raise DomainError(f"p must be a finite number > 1, got {p}")
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return p, int(n)


def regime_bounds(n: int) -> tuple[float, float]:
    """Breakpoints (p1, p2) between first/middle and middle/saturated regimes."""
    s = math.sqrt(2.0 * n)
    return 1.0 + (n - 1) / (s - 1.0), s


def middle_minimizer(p: float, n: int) -> float:
    """Interior root a+ of f' (only meaningful in the middle regime)."""
    return (-n * (p - 2.0) + math.sqrt(2.0 * n) * (n - p)) / ((n - 2.0) * (p - 2.0))


def kappa(p, n) -> KatoConstant:
    p, n = check_pn(p, n)
    p1, p2 = regime_bounds(n)
    if p <= p1:
        # exact boundary goes to the first branch; C^1 matching makes it immaterial
        value = 1.0 + (p - 1.0) ** 2 / (n - 1)
        return KatoConstant(p, n, value, Regime.FIRST, 1.0)
    if p < p2:
        value = 2.0 - (p - p2) ** 2 / (math.sqrt(n) - math.sqrt(2.0)) ** 2
        return KatoConstant(p, n, value, Regime.MIDDLE, middle_minimizer(p, n))
    return KatoConstant(p, n, 2.0, Regime.SATURATED, 0.0)


def kappa_value(p, n):
    """Vectorized kappa(p, n) over array-like p (and n); no regime bookkeeping."""
    p = np.asarray(p, dtype=float)
    n = np.asarray(n, dtype=float)
    if np.any(p <= 1.0) or np.any(n < 2):
        raise DomainError("kappa_value needs p > 1 and n >= 2")
    s = np.sqrt(2.0 * n)
    p1 = 1.0 + (n - 1.0) / (s - 1.0)
    first = 1.0 + (p - 1.0) ** 2 / (n - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):  # n = 2 has no middle regime
        middle = 2.0 - (p - s) ** 2 / (np.sqrt(n) - np.sqrt(2.0)) ** 2
    out = np.where(p <= p1, first, np.where(p < s, middle, 2.0))
    return out if out.ndim else float(out)


def kappa_scalar(p, n) -> float:
    """Best constant for scalar p-harmonic functions: min{1 + (p-1)^2/(n-1), 2}."""
    p, n = check_pn(p, n)
    return min(1.0 + (p - 1.0) ** 2 / (n - 1), 2.0)


def _check_a(a: float) -> float:
    a = float(a)
    if not 0.0 <= a <= 1.0:
        raise DomainError(f"a must lie in [0, 1], got {a}")
    return a


def f_objective(a, p, n) -> float:
    a = _check_a(a)
    p, n = check_pn(p, n)
    return (a * a * (p - 2.0) ** 2 + a * (p * p - 4.0) + 2.0 * n) / ((n - 2.0) * a + n)


def f_derivative(a, p, n) -> float:
    a = _check_a(a)
    p, n = check_pn(p, n)
    num = a * a * (n - 2.0) * (p - 2.0) ** 2 + 2.0 * a * n * (p - 2.0) ** 2 + n * (p * p - 2.0 * n)
    return num / (a * (n - 2.0) + n) ** 2


def golden_section(func, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200):
    """Minimize a unimodal ``func`` on [lo, hi]; returns (x, func(x))."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = func(x1), func(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f2 > f1:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = func(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = func(x2)
    x = x1 if f1 <= f2 else x2
    return x, min(f1, f2)


def kappa_oracle(p, n, grid_points: int = 100_000, refine_tol: float = 1e-12):
    """Brute-force min of f on [0, 1]: uniform grid, then golden section on the best bracket.

    Returns ``(value, a_min)``.
    """
    p, n = check_pn(p, n)
    if grid_points < 1000:
        raise DomainError("grid_points must be at least 1000")
    idx, _ = kernels.f_grid_argmin(p, n, int(grid_points))
    step = 1.0 / (grid_points - 1)
    lo = max(0.0, (idx - 1) * step)
    hi = min(1.0, (idx + 1) * step)

    def f(a):
        return (a * a * (p - 2.0) ** 2 + a * (p * p - 4.0) + 2.0 * n) / ((n - 2.0) * a + n)

    a_min, value = golden_section(f, lo, hi, tol=refine_tol)
    # golden section never samples the bracket ends; the minimum may sit on them
    for end in (lo, hi):
        if f(end) <= value:
            a_min, value = end, f(end)
    return value, a_min
