"""Exponent shift gamma for minimizing p-harmonic tangent maps S^2 -> S^3.

Testing stability with |grad u|^(1+gamma) and Bochner with |grad u|^(p-2+2 gamma)
leaves A * int |grad u|^(p+2+2g) + B * int |grad u|^(p+2g) <= 0, with

    A = (3-p)(p + 2g(p-1)) / (3 (1+g)^2) - 1/2
    B = 1 - (3-p)^2 (p + 2g(p-1)) / (4 (1+g)^2)

and C = 3/(p + 2g(p-1)). Tangent maps are constant whenever some admissible
g (-p/(2(p-1)) < g <= 0) gives A >= 0 and B > 0; such g exists up to the real
root p0 ~ 2.6427 of 2p^3 - 10p^2 + 17p - 12.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .config import GATE_TOL
from .errors import DomainError


@dataclass(frozen=True)
class GammaCertificate:
    p: float
    gamma: float
    a_coef: float
    b_coef: float
    c_const: float
    admissible: bool

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "gamma": self.gamma,
            "A": self.a_coef,
            "B": self.b_coef,
            "C": self.c_const,
            "admissible": self.admissible,
        }


def gamma_lower_bound(p):
    """-p/(2(p-1)); gamma must lie strictly above it."""
    return -p / (2.0 * (p - 1.0))


def raw_coefficients(p, gamma):
    """A, B, C without domain checks; broadcasts over arrays."""
    p = np.asarray(p, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    s = p + 2.0 * gamma * (p - 1.0)
    q = (1.0 + gamma) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        a = (3.0 - p) * s / (3.0 * q) - 0.5
        b = 1.0 - (3.0 - p) ** 2 * s / (4.0 * q)
        c = 3.0 / s
    return a, b, c


def _check_p(p):
    p = float(p)
    if not 2.0 <= p < 3.0:
        raise DomainError(f"need 2 <= p < 3, got {p}")
    return p


def coefficients(p, gamma) -> tuple[float, float, float]:
    p = _check_p(p)
    gamma = float(gamma)
    if not gamma > gamma_lower_bound(p):
        raise DomainError(f"gamma={gamma} must exceed -p/(2(p-1)) = {gamma_lower_bound(p)}")
    if gamma > 0.0:
        raise DomainError(f"gamma must be <= 0, got {gamma}")
    a, b, c = raw_coefficients(p, gamma)
    return float(a), float(b), float(c)


def a_condition_margin(p, gamma):
    """2(3-p)(p + 2g(p-1)) - 3(1+g)^2; nonnegative exactly when A >= 0."""
    return 2.0 * (3.0 - p) * (p + 2.0 * gamma * (p - 1.0)) - 3.0 * (1.0 + gamma) ** 2


def gamma_vertex(p):
    """Maximizer in gamma of the A-condition margin: (-2p^2 + 8p - 9)/3."""
    return (-2.0 * p * p + 8.0 * p - 9.0) / 3.0


def feasible_gamma_interval(p) -> tuple[float, float] | None:
    """Solution set of -3 g^2 + b g + c >= 0 (the A >= 0 condition), or None if empty."""
    p = _check_p(p)
    b = 2.0 * (-2.0 * p * p + 8.0 * p - 9.0)
    c = 2.0 * p * (3.0 - p) - 3.0
    disc = b * b + 12.0 * c
    if disc < 0.0:
        return None
    root = math.sqrt(disc)
    return (b - root) / 6.0, (b + root) / 6.0


def cubic(p):
    return 2.0 * p**3 - 10.0 * p**2 + 17.0 * p - 12.0


def quartic(p):
    return 2.0 * p**4 - 16.0 * p**3 + 47.0 * p**2 - 63.0 * p + 36.0


def p0_cardano() -> float:
    t = (2.0 * (59.0 + 9.0 * math.sqrt(43.0))) ** (1.0 / 3.0)
    return (5.0 + t / 2.0 - 1.0 / t) / 3.0


def gamma_at_p0_closed_form() -> float:
    t = (math.sqrt(43.0) - 4.0) ** (1.0 / 3.0)
    return (-1.0 + t - 3.0 / t) / 3.0


def p0_cubic(tol: float = 1e-15, max_iter: int = 100) -> float:
    """Real root of 2p^3 - 10p^2 + 17p - 12: Newton from 2.6, bisection-safeguarded on [2.5, 2.7]."""
    lo, hi = 2.5, 2.7
    if cubic(lo) * cubic(hi) > 0:
        raise ArithmeticError("cubic root not bracketed")
    x = 2.6
    for _ in range(max_iter):
        fx = cubic(x)
        if fx == 0.0:
            return x
        if fx < 0.0:  # cubic is increasing through its root
            lo = x
        else:
            hi = x
        dfx = 6.0 * x * x - 20.0 * x + 17.0
        step = fx / dfx if dfx != 0.0 else math.inf
        nxt = x - step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= tol * max(1.0, abs(x)):
            return nxt
        x = nxt
    return x


def certificate(p, gamma) -> GammaCertificate:
    """Evaluate A, B, C at (p, gamma) and flag admissibility; no domain errors."""
    p = float(p)
    gamma = float(gamma)
    a, b, c = (float(v) for v in raw_coefficients(p, gamma))
    ok = (
        gamma > gamma_lower_bound(p)
        and gamma <= 0.0
        and a_condition_margin(p, gamma) >= -GATE_TOL
        and b > 0.0
    )
    return GammaCertificate(p, gamma, a, b, c, bool(ok))


def b_positive_sufficient(p, gamma) -> bool:
    """For gamma <= -1/2, p + 2g(p-1) <= 1, so 3 - p < 2(1+g) already forces B > 0."""
    return gamma <= -0.5 and 3.0 - p < 2.0 * (1.0 + gamma)


def find_certificate(p, scan_points: int = 2001) -> GammaCertificate | None:
    """First admissible gamma among 0, gamma*(p0), then a scan of the feasible interval."""
    p = _check_p(p)
    gamma_star = gamma_vertex(p0_cubic())
    for g in (0.0, gamma_star):
        cert = certificate(p, g)
        if cert.admissible:
            return cert
    interval = feasible_gamma_interval(p)
    if interval is None:
        return None
    lo = max(interval[0], gamma_lower_bound(p))
    hi = min(interval[1], 0.0)
    if lo > hi:
        return None
    vertex = min(max(gamma_vertex(p), lo), hi)
    candidates = np.concatenate([[vertex], np.linspace(lo, hi, scan_points)])
    for g in candidates:
        cert = certificate(p, g)
        if cert.admissible:
            return cert
    return None


@dataclass
class RegionScan:
    p: np.ndarray  # (P,)
    gamma: np.ndarray  # (G,)
    a: np.ndarray  # (G, P)
    b: np.ndarray
    a_negative: np.ndarray
    b_negative: np.ndarray
    gamma_excluded: np.ndarray
    admissible: np.ndarray
    curves: dict[str, list[tuple[float, float]]]

    def rows(self):
        """(p, gamma, A, B, admissible) for every cell, p varying slowest."""
        for j, pv in enumerate(self.p):
            for i, gv in enumerate(self.gamma):
                yield float(pv), float(gv), float(self.a[i, j]), float(self.b[i, j]), bool(self.admissible[i, j])

    def rightmost_admissible_p(self) -> float | None:
        cols = np.flatnonzero(self.admissible.any(axis=0))
        return float(self.p[cols[-1]]) if cols.size else None


def _column_roots(func, gammas: np.ndarray) -> list[float]:
    vals = func(gammas)
    roots = []
    for i in range(len(gammas) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if not (np.isfinite(v0) and np.isfinite(v1)):
            continue
        if v0 == 0.0:
            roots.append(float(gammas[i]))
        elif v0 * v1 < 0.0:
            roots.append(float(brentq(func, gammas[i], gammas[i + 1], xtol=1e-14)))
    if vals[-1] == 0.0:
        roots.append(float(gammas[-1]))
    return roots


def region_scan(p_range=(2.0, 3.0), gamma_range=(-1.0, 0.0), steps=(201, 201)) -> RegionScan:
    """Label the (p, gamma) grid by which admissibility condition fails.

    Boundary curves A = 0, B = 0 and gamma = -p/(2(p-1)) are located per p-column
    by sign changes along gamma, refined with Brent's method.
    """
    (p_lo, p_hi), (g_lo, g_hi) = p_range, gamma_range
    if not (2.0 <= p_lo < p_hi <= 3.0 and -1.0 <= g_lo < g_hi <= 0.0):
        raise DomainError("ranges must lie within [2, 3] x [-1, 0]")
    n_p, n_g = steps
    ps = np.linspace(p_lo, p_hi, n_p)
    gs = np.linspace(g_lo, g_hi, n_g)
    pp, gg = np.meshgrid(ps, gs)
    a, b, _ = raw_coefficients(pp, gg)
    margin = a_condition_margin(pp, gg)
    a_neg = margin < -GATE_TOL
    b_neg = ~(b > 0.0)
    g_excl = gg <= gamma_lower_bound(pp)
    admissible = ~a_neg & ~b_neg & ~g_excl & (pp < 3.0)

    fine = np.linspace(g_lo, g_hi, max(4 * n_g, 400))
    curves: dict[str, list[tuple[float, float]]] = {"A=0": [], "B=0": [], "gamma_bound": []}
    for pv in ps:
        # roots of the cleared forms at g = -1 are spurious: A and B are 0/0 there
        for g in _column_roots(lambda g: a_condition_margin(pv, g), fine):
            if g != -1.0:
                curves["A=0"].append((float(pv), g))
        # B = 0  <=>  4(1+g)^2 - (3-p)^2 (p + 2g(p-1)) = 0
        for g in _column_roots(lambda g: 4.0 * (1.0 + g) ** 2 - (3.0 - pv) ** 2 * (pv + 2.0 * g * (pv - 1.0)), fine):
            if g != -1.0:
                curves["B=0"].append((float(pv), g))
        gb = gamma_lower_bound(pv)
        if g_lo <= gb <= g_hi:
            curves["gamma_bound"].append((float(pv), float(gb)))
    return RegionScan(ps, gs, a, b, a_neg, b_neg, g_excl, admissible, curves)
