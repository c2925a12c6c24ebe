"""Checks of the mixed Kato/Cauchy-Schwarz bound and the radial Rayleigh constant."""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .errors import DomainError
from .gamma import gamma_lower_bound
from .jets import sample_p_harmonic_batch
from . import kernels

# Tangent maps in the gamma argument live on S^2, so jets have a 2-dim domain.
MIXED_KCS_DOMAIN_DIM = 2
MIXED_KCS_TARGET_DIM = 3


def _check_mixed(p, gamma, theta1=0.0):
    p, gamma, theta1 = float(p), float(gamma), float(theta1)
    if not 2.0 <= p < 3.0:
        raise DomainError(f"need 2 <= p < 3, got {p}")
    if not gamma_lower_bound(p) < gamma <= 0.0:
        raise DomainError(f"need -p/(2(p-1)) < gamma <= 0, got {gamma}")
    if not -1.0 <= theta1 <= 1.0:
        raise DomainError(f"theta1 must lie in [-1, 1], got {theta1}")
    return p, gamma, theta1


def mixed_kcs_discriminant_scaled(p, gamma, theta1):
    """(p-2) * Delta / 12 = 3 t1^2 t2^2 (p-2) - 2 (2p + E) t1^2, with E = -2 gamma (p-1).

    Same sign as the discriminant and continuous down to p = 2. Broadcasts.
    """
    p = np.asarray(p, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    t1sq = np.asarray(theta1, dtype=float) ** 2
    e = -2.0 * gamma * (p - 1.0)
    return 3.0 * t1sq * (1.0 - t1sq) * (p - 2.0) - 2.0 * (2.0 * p + e) * t1sq


def mixed_kcs_discriminant(p, gamma, theta1) -> float:
    """Discriminant 36 t1^2 t2^2 - 24 (2p + E) t1^2 / (p-2) of the (z, w) form.

    At p = 2 the quotient diverges; the rescaled form is returned instead.
    """
    p, gamma, theta1 = _check_mixed(p, gamma, theta1)
    if p == 2.0:
        return float(mixed_kcs_discriminant_scaled(p, gamma, theta1))
    t1sq = theta1 * theta1
    e = -2.0 * gamma * (p - 1.0)
    return 36.0 * t1sq * (1.0 - t1sq) - 4.0 * (2.0 * p + e) * t1sq * 6.0 / (p - 2.0)


def mixed_kcs_sides(grad, hess, p, gamma):
    """Both sides of 3|D|Du||^2 + (p-2)|<Du/|Du|, D|Du|>|^2 <= C(|D^2u|^2 + ((p-2)+2g(p-1))|D|Du||^2)."""
    inv = kernels.jet_invariants(grad, hess)
    c = 3.0 / (p + 2.0 * gamma * (p - 1.0))
    lhs = 3.0 * inv[:, 2] + (p - 2.0) * inv[:, 3]
    rhs = c * (inv[:, 1] + ((p - 2.0) + 2.0 * gamma * (p - 1.0)) * inv[:, 2])
    return lhs, rhs, inv


def verify_mixed_kcs_pointwise(p, gamma, samples: int, seed, d: int = MIXED_KCS_TARGET_DIM) -> float:
    """max(LHS - RHS) over random p-harmonic jets; <= 0 when the bound holds."""
    p, gamma, _ = _check_mixed(p, gamma)
    grad, hess = sample_p_harmonic_batch(p, MIXED_KCS_DOMAIN_DIM, d, samples, seed)
    lhs, rhs, inv = mixed_kcs_sides(grad, hess, p, gamma)
    keep = inv[:, 2] >= 1e-28  # |D|Du|| >= 1e-14
    if not keep.any():
        return -math.inf
    return float(np.max(lhs[keep] - rhs[keep]))


def _check_rayleigh(n, p, epsilon):
    n, p, epsilon = float(n), float(p), float(epsilon)
    if not n > p:
        raise DomainError(f"need n > p, got n={n}, p={p}")
    if not 0.0 < epsilon < 0.1:
        raise DomainError(f"need 0 < epsilon < 0.1, got {epsilon}")
    return n, p, epsilon


def rayleigh_lower_bound(n, p) -> float:
    return (n - p) ** 2 / 4.0


def log_cutoff(r, epsilon):
    """1 on [eps, 1/eps], 0 outside [eps/2, 2/eps], linear in log r in between."""
    r = np.asarray(r, dtype=float)
    s = np.log(r)
    le = math.log(epsilon)
    l2 = math.log(2.0)
    up = (s - (le - l2)) / l2
    down = ((-le + l2) - s) / l2
    return np.clip(np.minimum(up, down), 0.0, 1.0)


def log_cutoff_slope(r, epsilon):
    """d chi / dr (one-sided values at the kinks are irrelevant for integration)."""
    r = np.asarray(r, dtype=float)
    l2 = math.log(2.0)
    out = np.zeros_like(r)
    rising = (r > epsilon / 2.0) & (r < epsilon)
    falling = (r > 1.0 / epsilon) & (r < 2.0 / epsilon)
    out[rising] = 1.0 / (l2 * r[rising])
    out[falling] = -1.0 / (l2 * r[falling])
    return out


def _quad_pieces(func, knots, epsabs):
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        val, err = integrate.quad(func, a, b, epsabs=epsabs, epsrel=1e-12, limit=200)
        if not np.isfinite(val) or err > max(1e3 * epsabs, 1e-8 * abs(val)):
            raise ArithmeticError(f"quadrature failed on [{a}, {b}] (estimate {val}, error {err})")
        total += val
    return total


def rayleigh_quotient(f, fprime, n, p, knots, epsabs: float = 1e-10) -> float:
    """int f'(r)^2 r^(n-p+1) dr / int f(r)^2 r^(n-p-1) dr over [knots[0], knots[-1]].

    ``knots`` must include every point where f' jumps; each span is further cut
    at factor-2 steps in r so each quadrature piece is well scaled.
    """
    knots = [float(k) for k in knots]
    if len(knots) < 2 or knots[0] <= 0.0 or any(b <= a for a, b in zip(knots[:-1], knots[1:])):
        raise DomainError("knots must be increasing and positive")
    fine = [knots[0]]
    for a, b in zip(knots[:-1], knots[1:]):
        pieces = max(1, int(math.ceil(math.log(b / a) / math.log(2.0))))
        fine.extend(np.geomspace(a, b, pieces + 1)[1:])
    num = _quad_pieces(lambda r: float(fprime(r)) ** 2 * r ** (n - p + 1.0), fine, epsabs)
    den = _quad_pieces(lambda r: float(f(r)) ** 2 * r ** (n - p - 1.0), fine, epsabs)
    return num / den


def rayleigh_quotient_estimate(n, p, epsilon) -> float:
    """Quotient of f(r) = r^(-(n-p)/2) chi(r) with chi the log-linear cutoff at epsilon."""
    n, p, epsilon = _check_rayleigh(n, p, epsilon)
    k = (n - p) / 2.0

    def f(r):
        return r ** (-k) * float(log_cutoff(r, epsilon))

    def fprime(r):
        chi = float(log_cutoff(r, epsilon))
        dchi = float(log_cutoff_slope(np.array([r]), epsilon)[0])
        return r ** (-k) * dchi - k * r ** (-k - 1.0) * chi

    knots = [epsilon / 2.0, epsilon, 1.0 / epsilon, 2.0 / epsilon]
    return rayleigh_quotient(f, fprime, n, p, knots)


def bump_function(a, b, coeffs):
    """Smooth f supported on [a, b]: exp(-1/(t(1-t))) * sum c_k t^k, t = (r-a)/(b-a).

    Returns (f, f', knots).
    """
    a, b = float(a), float(b)
    if not 0.0 < a < b:
        raise DomainError("need 0 < a < b")
    coeffs = np.asarray(coeffs, dtype=float)
    dcoeffs = np.polynomial.polynomial.polyder(coeffs)
    width = b - a

    def _parts(r):
        t = (r - a) / width
        q = t * (1.0 - t)
        if q <= 0.0:
            return 0.0, 0.0, t, q
        return math.exp(-1.0 / q), 1.0, t, q

    def f(r):
        bump, inside, t, _ = _parts(r)
        return bump * np.polynomial.polynomial.polyval(t, coeffs) if inside else 0.0

    def fprime(r):
        bump, inside, t, q = _parts(r)
        if not inside:
            return 0.0
        dbump = bump * (1.0 - 2.0 * t) / (q * q)
        poly = np.polynomial.polynomial.polyval(t, coeffs)
        dpoly = np.polynomial.polynomial.polyval(t, dcoeffs)
        return (dbump * poly + bump * dpoly) / width

    return f, fprime, [a, b]


def random_bump(rng, max_degree: int = 4):
    """Random ``bump_function`` with support [a, b], 0.01 <= a, b/a in [2, 1000]."""
    a = 10.0 ** rng.uniform(-2.0, 0.0)
    b = a * 10.0 ** rng.uniform(math.log10(2.0), 3.0)
    coeffs = rng.standard_normal(rng.integers(1, max_degree + 2))
    coeffs[0] += 2.0  # keep f away from identically tiny
    return bump_function(a, b, coeffs)


def rayleigh_estimate_closed_form(n, p, epsilon) -> float:
    """Exact value of ``rayleigh_quotient_estimate`` for the same family.

    In s = log r the quotient is k^2 + int chi'^2 / int chi^2 with k = (n-p)/2;
    the cutoff gives int chi'^2 = 2/log 2 and int chi^2 = 2 log(1/eps) + (2/3) log 2.
    """
    n, p, epsilon = _check_rayleigh(n, p, epsilon)
    l2 = math.log(2.0)
    return rayleigh_lower_bound(n, p) + (2.0 / l2) / (2.0 * math.log(1.0 / epsilon) + 2.0 * l2 / 3.0)
