"""Pure numpy implementations of the batch kernels.

Shapes: ``grad`` is (N, n, d), ``hess`` is (N, n, n, d), both float64.
"""
import numpy as np

BACKEND = "python"


def f_grid_argmin(p, n, npts):
    a = np.linspace(0.0, 1.0, npts)
    vals = (a * a * (p - 2.0) ** 2 + a * (p * p - 4.0) + 2.0 * n) / ((n - 2.0) * a + n)
    idx = int(np.argmin(vals))
    return idx, float(vals[idx])


def _norm_gradient(grad, hess):
    # w_i = sum_{j,b} u_j^b u_ij^b  (= |grad u| * d_i |grad u|)
    return np.einsum("kjb,kijb->ki", grad, hess)


def _raw_residual(grad, hess, p):
    g2 = np.einsum("kia,kia->k", grad, grad)
    trace = np.einsum("kiia->ka", hess)
    w = _norm_gradient(grad, hess)
    return trace + ((p - 2.0) / g2)[:, None] * np.einsum("kia,ki->ka", grad, w)


def project_p_harmonic(grad, hess, p):
    n = grad.shape[1]
    g2 = np.einsum("kia,kia->k", grad, grad)
    hess[:, n - 1, n - 1, :] = 0.0
    r0 = _raw_residual(grad, hess, p)
    v = grad[:, n - 1, :]
    c = (p - 2.0) / g2
    vr = np.einsum("ka,ka->k", v, r0)
    vv = np.einsum("ka,ka->k", v, v)
    hess[:, n - 1, n - 1, :] = -r0 + (c * vr / (1.0 + c * vv))[:, None] * v


def p_residuals(grad, hess, p):
    return np.abs(_raw_residual(grad, hess, p)).max(axis=1)


def jet_invariants(grad, hess):
    g2 = np.einsum("kia,kia->k", grad, grad)
    h2 = np.einsum("kija,kija->k", hess, hess)
    w = _norm_gradient(grad, hess)
    dn2 = np.einsum("ki,ki->k", w, w) / g2
    t = np.einsum("kia,ki->ka", grad, w)
    inner2 = np.einsum("ka,ka->k", t, t) / (g2 * g2)
    return np.stack([g2, h2, dn2, inner2], axis=1)
