"""Regularity gates for minimizing p-harmonic maps B^n -> S^d.

n0(p, d) is the largest n for which both

    kappa(p, n-1) >= (d+p-2)(n-2)/((d-p)(n-1)) - (p-2)
    d (n-p)^2     <  4 (d-p)(n-1)

hold. Maps are regular for n <= n0, have isolated singularities for
n = n0 + 1 and a singular set of dimension <= n - n0 - 1 beyond that.
"""
from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoFeasibleN
from .kato_core import kappa, kappa_value

N_CAP = 10**6


class Status(str, enum.Enum):
    REGULAR = "Regular"
    ISOLATED = "IsolatedSingularities"
    HAUSDORFF = "HausdorffBound"


@dataclass(frozen=True)
class GateResult:
    cond1: bool
    cond2: bool
    e1: float
    e2: float


@dataclass(frozen=True)
class RegularityVerdict:
    p: float
    n: int
    d: int
    n0: int
    status: Status
    e1: float
    e2: float
    hausdorff_dim: int | None = None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "d": self.d,
            "n0": self.n0,
            "status": self.status.value,
            "hausdorff_dim": self.hausdorff_dim,
            "e1": self.e1,
            "e2": self.e2,
        }

    def csv_row(self) -> list:
        status = self.status.value
        if self.status is Status.HAUSDORFF:
            status = f"HausdorffBound({self.hausdorff_dim})"
        return [self.p, self.n, self.d, self.n0, status, self.e1, self.e2]


CSV_HEADER = ["p", "n", "d", "n0", "status", "e1", "e2"]


def _as_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise DomainError(f"{name} must be an integer, got {value!r}")
    return int(value)


def _check_pd(p, d):
    d = _as_int(d, "d")
    p = float(p)
    if not 2.0 <= p < d:
        raise DomainError(f"need 2 <= p < d, got p={p}, d={d}")
    return p, d


def gate_values(p, n, d) -> tuple[float, float]:
    """E1 = (n-2)(d+p-2)/((n-1)(d-p)),  E2 = 4(n-2)(d+p-2)/(d (n-p)^2)."""
    e1 = (n - 2) * (d + p - 2.0) / ((n - 1) * (d - p))
    e2 = math.inf if n == p else 4.0 * (n - 2) * (d + p - 2.0) / (d * (n - p) ** 2)
    return e1, e2


def gate_conditions(p, n, d) -> GateResult:
    p, d = _check_pd(p, d)
    n = _as_int(n, "n")
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    rhs = (d + p - 2.0) * (n - 2) / ((d - p) * (n - 1)) - (p - 2.0)
    cond1 = kappa(p, n - 1).value >= rhs
    cond2 = d * (n - p) ** 2 < 4.0 * (d - p) * (n - 1)
    e1, e2 = gate_values(p, n, d)
    return GateResult(bool(cond1), bool(cond2), e1, e2)


def n0(p, d) -> int:
    p, d = _check_pd(p, d)
    first = gate_conditions(p, 3, d)
    if not (first.cond1 and first.cond2):
        raise NoFeasibleN(f"gates fail at n = 3 for p={p}, d={d}")
    best = 3
    misses = 0
    n = 4
    while n <= N_CAP:
        g = gate_conditions(p, n, d)
        if g.cond1 and g.cond2:
            best = n
        # d(n-p)^2 - 4(d-p)(n-1) is convex in n and negative at n = p,
        # so past p the second gate never comes back once it fails
        if not g.cond2 and n > p:
            misses += 1
            if misses >= 2:
                break
        else:
            misses = 0
        n += 1
    return best


def verdict(p, n, d) -> RegularityVerdict:
    p, d = _check_pd(p, d)
    n = _as_int(n, "n")
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    top = n0(p, d)
    e1, e2 = gate_values(p, n, d)
    if n <= top:
        return RegularityVerdict(p, n, d, top, Status.REGULAR, e1, e2)
    if n == top + 1:
        return RegularityVerdict(p, n, d, top, Status.ISOLATED, e1, e2)
    return RegularityVerdict(p, n, d, top, Status.HAUSDORFF, e1, e2, hausdorff_dim=n - top - 1)


def _gates_hold(p: np.ndarray, n: int, d: int) -> np.ndarray:
    rhs = (d + p - 2.0) * (n - 2) / ((d - p) * (n - 1)) - (p - 2.0)
    cond1 = kappa_value(p, n - 1) >= rhs
    cond2 = d * (n - p) ** 2 < 4.0 * (d - p) * (n - 1)
    return cond1 & cond2


def max_p_regular(n, d, step: float = 1e-6, tol: float = 1e-10) -> float | None:
    """sup of p such that both gates hold for every p' in [2, p].

    Scans [2, d) with ``step``, then bisects the first failing cell to ``tol``.
    Returns None if the gates already fail at p = 2, and d if they never fail.
    """
    n = _as_int(n, "n")
    d = _as_int(d, "d")
    if n < 3 or d <= 2:
        raise DomainError("need n >= 3 and d > 2")
    if not _gates_hold(np.array([2.0]), n, d)[0]:
        return None
    count = int(math.ceil((d - 2.0) / step))
    grid = 2.0 + step * np.arange(count)
    ok = _gates_hold(grid, n, d)
    bad = np.flatnonzero(~ok)
    if bad.size == 0:
        return float(d)
    lo, hi = grid[bad[0] - 1], grid[bad[0]]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _gates_hold(np.array([mid]), n, d)[0]:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def corollary_rhs(p):
    """Right side of the first gate at n = d = 4: 2(p+2)/(3(4-p)) - (p-2)."""
    p = np.asarray(p, dtype=float)
    out = 2.0 * (p + 2.0) / (3.0 * (4.0 - p)) - (p - 2.0)
    return out if out.ndim else float(out)


def kappa_p3_table(p_grid) -> list[tuple[float, float, float]]:
    p_grid = np.asarray(p_grid, dtype=float)
    if np.any(p_grid <= 1.0) or np.any(p_grid >= 4.0):
        raise DomainError("p grid must lie in (1, 4)")
    kap = np.atleast_1d(kappa_value(p_grid, 3))
    rhs = np.atleast_1d(corollary_rhs(p_grid))
    return [(float(a), float(b), float(c)) for a, b, c in zip(p_grid, kap, rhs)]
