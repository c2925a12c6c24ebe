"""Second-order jets of maps at a point and the extremal jets achieving kappa(p, n).

A jet stores u_i^a as ``grad[i, a]`` (shape n x d) and u_ij^a as
``hess[i, j, a]`` (shape n x n x d), in flat normal coordinates. Jets of
sphere-valued maps carry ``sphere_point``: the value u(x) in ambient
coordinates. For those the Hessian is projected onto the tangent space
before any Kato quantity or residual is computed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from . import kernels
from .config import DEGENERATE_NORM_TOL, DISCRIMINANT_TOL
from .errors import DegenerateGradient, DegenerateGradientOfNorm, DomainError, SamplingError
from .kato_core import check_pn, kappa


@dataclass
class PointJet:
    grad: np.ndarray
    hess: np.ndarray
    sphere_point: np.ndarray | None = None

    def __post_init__(self):
        self.grad = np.array(self.grad, dtype=float)
        self.hess = np.array(self.hess, dtype=float)
        n, d = self.grad.shape
        if self.hess.shape != (n, n, d):
            raise ValueError(f"hess has shape {self.hess.shape}, expected {(n, n, d)}")
        if not np.array_equal(self.hess, self.hess.transpose(1, 0, 2)):
            raise ValueError("hess must be symmetric in (i, j)")
        if self.sphere_point is not None:
            self.sphere_point = np.array(self.sphere_point, dtype=float)
            if self.sphere_point.shape != (d,):
                raise ValueError("sphere_point must have length d")

    @property
    def n(self) -> int:
        return self.grad.shape[0]

    @property
    def d(self) -> int:
        return self.grad.shape[1]

    def scaled(self, lam: float) -> "PointJet":
        return PointJet(lam * self.grad, lam * self.hess, self.sphere_point)

    def padded(self, d: int) -> "PointJet":
        """Compose with the inclusion R^self.d -> R^d."""
        if d < self.d:
            raise ValueError("cannot pad to a smaller target")
        grad = np.zeros((self.n, d))
        hess = np.zeros((self.n, self.n, d))
        grad[:, : self.d] = self.grad
        hess[:, :, : self.d] = self.hess
        return PointJet(grad, hess)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "d": self.d,
            "grad": self.grad.ravel().tolist(),
            "hess": self.hess.ravel().tolist(),
        }
        if self.sphere_point is not None:
            out["sphere_point"] = self.sphere_point.tolist()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "PointJet":
        n, d = int(data["n"]), int(data["d"])
        grad = np.asarray(data["grad"], dtype=float).reshape(n, d)
        hess = np.asarray(data["hess"], dtype=float).reshape(n, n, d)
        return cls(grad, hess, data.get("sphere_point"))


def symmetrize(hess: np.ndarray) -> np.ndarray:
    return 0.5 * (hess + hess.transpose(1, 0, 2))


def gradient_norm(jet: PointJet) -> float:
    return float(np.linalg.norm(jet.grad))


def covariant_hessian(jet: PointJet) -> np.ndarray:
    """Hessian with the normal component removed for sphere-valued jets."""
    if jet.sphere_point is None:
        return jet.hess
    nu = jet.sphere_point / np.linalg.norm(jet.sphere_point)
    return jet.hess - np.einsum("ija,a,b->ijb", jet.hess, nu, nu)


def residual_vector(jet: PointJet, p: float) -> np.ndarray:
    """sum_i u_ii^a + (p-2)/|grad u|^2 sum_{i,j,b} u_i^a u_j^b u_ij^b, for each a."""
    g2 = float(np.sum(jet.grad**2))
    if g2 == 0.0:
        raise DegenerateGradient("p-harmonic equation degenerates where grad u = 0")
    hess = covariant_hessian(jet)
    w = np.einsum("jb,ijb->i", jet.grad, hess)
    return np.einsum("iia->a", hess) + (p - 2.0) / g2 * (jet.grad.T @ w)


def verify_p_harmonic(jet: PointJet, p: float) -> float:
    """Largest absolute component of the p-harmonic residual (tangential for sphere jets)."""
    return float(np.max(np.abs(residual_vector(jet, p))))


def norm_gradient(jet: PointJet) -> np.ndarray:
    """d_i |grad u| = sum_{j,b} u_j^b u_ij^b / |grad u|."""
    g = gradient_norm(jet)
    if g == 0.0:
        raise DegenerateGradient("|grad u| is not differentiable where grad u = 0")
    return np.einsum("jb,ijb->i", jet.grad, covariant_hessian(jet)) / g


def kato_ratio(jet: PointJet) -> float:
    """|hess u|^2 / |grad |grad u||^2."""
    dn = norm_gradient(jet)
    dn_norm = float(np.linalg.norm(dn))
    if dn_norm < DEGENERATE_NORM_TOL:
        raise DegenerateGradientOfNorm(f"|grad|grad u|| = {dn_norm:.3e}")
    return float(np.sum(covariant_hessian(jet) ** 2)) / dn_norm**2


@dataclass(frozen=True)
class QuadraticFormZW:
    """c_z2 z^2 + c_w2 w^2 + c_zw z w, the per-direction Kato defect after rotation."""

    coef_z2: float
    coef_w2: float
    coef_zw: float
    discriminant: float

    def __call__(self, z: float, w: float) -> float:
        return self.coef_z2 * z * z + self.coef_w2 * w * w + self.coef_zw * z * w


def build_quadratic_form(p, n, alpha, kappa_value) -> QuadraticFormZW:
    p, n = check_pn(p, n)
    alpha = float(alpha)
    if alpha * alpha > 1.0:
        raise DomainError(f"alpha must lie in [-1, 1], got {alpha}")
    a = alpha * alpha
    b2 = 1.0 - a
    beta = math.sqrt(b2)
    c_z2 = -kappa_value + 2.0 + a * ((p - 1.0) ** 2 / (n - 1) - 1.0)
    c_w2 = 2.0 - (n - 2) * b2 / (n - 1)
    c_zw = -2.0 * alpha * beta * (n - p) / (n - 1)
    return QuadraticFormZW(c_z2, c_w2, c_zw, c_zw * c_zw - 4.0 * c_z2 * c_w2)


def degenerate_direction(form: QuadraticFormZW) -> tuple[float, float]:
    """Unit (z, w) with form(z, w) = 0, preferring z = 1 before normalization."""
    if abs(form.discriminant) >= DISCRIMINANT_TOL:
        raise DomainError(f"form has no real null direction (discriminant {form.discriminant:.3e})")
    if form.coef_z2 == 0.0 and form.coef_zw == 0.0:
        return 1.0, 0.0
    z, w = 1.0, -form.coef_zw / (2.0 * form.coef_w2)
    r = math.hypot(z, w)
    return z / r, w / r


def build_extremal_jet(p, n) -> PointJet:
    """Jet of a map R^n -> R^2 that is p-harmonic at the point with ratio exactly kappa(p, n)."""
    k = kappa(p, n)
    p, n = k.p, k.n
    alpha = math.sqrt(k.a_star)
    beta = math.sqrt(1.0 - k.a_star)
    grad = np.zeros((n, 2))
    grad[0, 0] = alpha
    grad[1, 1] = beta

    z, w = degenerate_direction(build_quadratic_form(p, n, alpha, k.value))
    x = alpha * z + beta * w
    y = beta * z - alpha * w

    hess = np.zeros((n, n, 2))
    hess[0, 0, 0] = x
    hess[0, 1, 1] = hess[1, 0, 1] = y
    # sum_b alpha_b u_1b^b = alpha x + beta y = z
    fill = -(x + (p - 2.0) * alpha * (alpha * x + beta * y)) / (n - 1)
    for j in range(1, n):
        hess[j, j, 0] = fill
    return PointJet(grad, hess)


def normal_form(jet: PointJet) -> PointJet:
    """Rotate domain and target so grad becomes diagonal with nonnegative entries."""
    n, d = jet.n, jet.d
    gram = jet.grad @ jet.grad.T
    evals, basis = np.linalg.eigh(gram)
    order = np.argsort(evals)[::-1]
    basis = basis[:, order]
    if np.linalg.det(basis) < 0:
        basis[:, -1] *= -1.0
    rows = basis.T @ jet.grad  # pairwise orthogonal rows

    norms = np.linalg.norm(rows, axis=1)
    scale = max(norms.max(initial=0.0), 1.0)
    keep = [i for i in range(min(n, d)) if norms[i] > 1e-12 * scale]
    cols = np.zeros((d, len(keep)))
    for c, i in enumerate(keep):
        cols[:, c] = rows[i] / norms[i]
    rest = null_space(cols.T) if keep else np.eye(d)
    target = np.zeros((d, d))
    # column i of target is the image direction of b_i, so grad' = diag(norms)
    free = iter(range(rest.shape[1]))
    for i in range(d):
        if i in keep:
            target[:, i] = cols[:, keep.index(i)]
        else:
            target[:, i] = rest[:, next(free)]

    grad = basis.T @ jet.grad @ target
    grad[np.abs(grad) < 1e-15 * scale] = 0.0
    hess = np.einsum("ki,lj,klb,ba->ija", basis, basis, jet.hess, target)
    hess = symmetrize(hess)
    sphere = None if jet.sphere_point is None else target.T @ jet.sphere_point
    return PointJet(grad, hess, sphere)


def sample_p_harmonic_jet(p, n, d, seed, max_draws: int = 1000) -> PointJet:
    """Random jet, Gaussian entries, with {u_nn^a} solved so the p-harmonic equation holds."""
    p, n = check_pn(p, n)
    if d < 2:
        raise DomainError("target dimension d must be >= 2")
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        grad = rng.standard_normal((n, d))
        if np.linalg.norm(grad) < 0.1:
            continue
        hess = symmetrize(rng.standard_normal((n, n, d)))
        return PointJet(grad, _project_one(grad, hess, p))
    raise SamplingError(f"no draw with |grad u| >= 0.1 in {max_draws} attempts")


def _project_one(grad: np.ndarray, hess: np.ndarray, p: float) -> np.ndarray:
    """Single-jet solve of M x = rhs, M = I + (p-2) v v^T / |grad u|^2, v = row n of grad."""
    n = grad.shape[0]
    hess = hess.copy()
    hess[n - 1, n - 1, :] = 0.0
    rhs = -residual_vector(PointJet(grad, hess), p)
    v = grad[n - 1]
    m = np.eye(grad.shape[1]) + (p - 2.0) * np.outer(v, v) / np.sum(grad**2)
    hess[n - 1, n - 1, :] = np.linalg.solve(m, rhs)
    return hess


def sample_p_harmonic_batch(p, n, d, count: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """``count`` projected jets as arrays (grad (N, n, d), hess (N, n, n, d)).

    Draws with |grad u| < 0.1 are redrawn, so the stream is deterministic in ``seed``.
    """
    p, n = check_pn(p, n)
    rng = np.random.default_rng(seed)
    grad = rng.standard_normal((count, n, d))
    small = np.linalg.norm(grad, axis=(1, 2)) < 0.1
    while small.any():
        grad[small] = rng.standard_normal((int(small.sum()), n, d))
        small = np.linalg.norm(grad, axis=(1, 2)) < 0.1
    hess = rng.standard_normal((count, n, n, d))
    hess = np.ascontiguousarray(0.5 * (hess + hess.transpose(0, 2, 1, 3)))
    hess = kernels.project_p_harmonic(grad, hess, p)
    return grad, hess


def batch_kato_ratios(grad, hess, min_norm_gradient: float = 1e-8) -> np.ndarray:
    """Kato ratios of a batch; NaN where |grad|grad u|| <= ``min_norm_gradient``."""
    inv = kernels.jet_invariants(grad, hess)
    ok = inv[:, 2] > min_norm_gradient**2
    out = np.full(len(inv), np.nan)
    out[ok] = inv[ok, 1] / inv[ok, 2]
    return out
