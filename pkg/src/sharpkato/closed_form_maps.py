"""Analytic jets of two explicit p-harmonic map families, plus a finite-difference jet.

``radial_power_jet`` differentiates u(x) = |x|^s, s = (p-n)/(p-1), whose Kato
ratio is 1 + (p-1)^2/(n-1) everywhere. ``equator_projection_jet`` differentiates
v(x) = (x_1..x_R, 0..0)/|(x_1..x_R)| into S^d, whose ratio is 2.
"""
from __future__ import annotations

import numpy as np

from .errors import ConstantExponent, DomainError
from .jets import PointJet, symmetrize
from .kato_core import check_pn


def radial_power_jet(p, n, x) -> PointJet:
    p, n = check_pn(p, n)
    if p == n:
        raise ConstantExponent("p == n gives a constant map")
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DomainError(f"x must have length {n}")
    r2 = float(x @ x)
    if r2 == 0.0:
        raise DomainError("x must be nonzero")
    s = (p - n) / (p - 1.0)
    r = np.sqrt(r2)
    grad = np.zeros((n, 2))
    hess = np.zeros((n, n, 2))
    grad[:, 0] = s * r ** (s - 2.0) * x
    hess[:, :, 0] = s * r ** (s - 4.0) * ((s - 2.0) * np.outer(x, x) + r2 * np.eye(n))
    return PointJet(grad, symmetrize(hess))


def radial_power_map(p, n):
    p, n = check_pn(p, n)
    s = (p - n) / (p - 1.0)

    def u(x):
        x = np.asarray(x, dtype=float)
        return np.array([np.sqrt(x @ x) ** s, 0.0])

    return u


def _check_equator(n, d, R, x):
    if not (2 <= R <= min(d + 1, n)):
        raise DomainError(f"need 2 <= R <= min(d+1, n), got R={R}, n={n}, d={d}")
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DomainError(f"x must have length {n}")
    if not np.any(x[:R]):
        raise DomainError("leading R coordinates of x must not all vanish")
    return x


def equator_projection_map(n, d, R):
    def v(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(d + 1)
        out[:R] = x[:R] / np.linalg.norm(x[:R])
        return out

    return v


def equator_projection_jet(n, d, R, x) -> PointJet:
    """Ambient jet of v into R^(d+1); ``sphere_point`` is v(x)."""
    x = _check_equator(n, d, R, x)
    y = x[:R]
    rho = np.linalg.norm(y)
    eye = np.eye(R)
    grad = np.zeros((n, d + 1))
    hess = np.zeros((n, n, d + 1))
    # grad[i, a] = d_i v^a
    grad[:R, :R] = eye / rho - np.outer(y, y) / rho**3
    # d_i d_j v^a = -(d_ia y_j + d_ja y_i + d_ij y_a)/rho^3 + 3 y_a y_i y_j / rho^5
    h = (
        -(np.einsum("ia,j->ija", eye, y) + np.einsum("ja,i->ija", eye, y) + np.einsum("ij,a->ija", eye, y)) / rho**3
        + 3.0 * np.einsum("i,j,a->ija", y, y, y) / rho**5
    )
    hess[:R, :R, :R] = h
    value = np.zeros(d + 1)
    value[:R] = y / rho
    return PointJet(grad, symmetrize(hess), sphere_point=value)


def _fd(map_evaluator, x, h):
    x = np.asarray(x, dtype=float)
    n = x.size
    f0 = np.asarray(map_evaluator(x), dtype=float)
    d = f0.size
    grad = np.zeros((n, d))
    hess = np.zeros((n, n, d))
    e = np.eye(n) * h
    fp = [np.asarray(map_evaluator(x + e[i]), dtype=float) for i in range(n)]
    fm = [np.asarray(map_evaluator(x - e[i]), dtype=float) for i in range(n)]
    for i in range(n):
        grad[i] = (fp[i] - fm[i]) / (2.0 * h)
        hess[i, i] = (fp[i] - 2.0 * f0 + fm[i]) / (h * h)
        for j in range(i + 1, n):
            mixed = (
                map_evaluator(x + e[i] + e[j])
                - map_evaluator(x + e[i] - e[j])
                - map_evaluator(x - e[i] + e[j])
                + map_evaluator(x - e[i] - e[j])
            ) / (4.0 * h * h)
            hess[i, j] = hess[j, i] = mixed
    return f0, grad, hess


def finite_difference_jet(map_evaluator, x, h: float = 1e-4, richardson: bool = True,
                          sphere_valued: bool = False) -> PointJet:
    """Central-difference jet of ``map_evaluator`` at x.

    With ``richardson`` the step-h and step-h/2 estimates are combined as
    (4 D(h/2) - D(h)) / 3, cancelling the O(h^2) term.
    """
    if not h > 0:
        raise DomainError("h must be positive")
    f0, grad, hess = _fd(map_evaluator, x, h)
    if richardson:
        _, grad2, hess2 = _fd(map_evaluator, x, h / 2.0)
        grad = (4.0 * grad2 - grad) / 3.0
        hess = (4.0 * hess2 - hess) / 3.0
    return PointJet(grad, symmetrize(hess), sphere_point=f0 if sphere_valued else None)
