# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batch kernels; same contracts as ``_pykernels``."""
import numpy as np

BACKEND = "cython"


def f_grid_argmin(double p, long n, long npts):
    cdef long k, best = 0
    cdef double a, val, bestval = 1e300
    cdef double c2 = (p - 2.0) * (p - 2.0), c1 = p * p - 4.0, c0 = 2.0 * n
    cdef double dn = n - 2.0, step = 1.0 / (npts - 1)
    for k in range(npts):
        a = k * step if k < npts - 1 else 1.0
        val = (a * a * c2 + a * c1 + c0) / (dn * a + n)
        if val < bestval:
            bestval = val
            best = k
    return best, bestval


cdef inline double _grad_sq(const double[:, ::1] g) noexcept nogil:
    cdef Py_ssize_t i, a
    cdef double s = 0.0
    for i in range(g.shape[0]):
        for a in range(g.shape[1]):
            s += g[i, a] * g[i, a]
    return s


cdef void _residual(const double[:, ::1] g, const double[:, :, ::1] h, double p,
                    double g2, double[::1] w, double[::1] res) noexcept nogil:
    cdef Py_ssize_t i, j, a, b
    cdef Py_ssize_t n = g.shape[0], d = g.shape[1]
    cdef double s
    for i in range(n):
        s = 0.0
        for j in range(n):
            for b in range(d):
                s += g[j, b] * h[i, j, b]
        w[i] = s
    for a in range(d):
        s = 0.0
        for i in range(n):
            s += g[i, a] * w[i]
        res[a] = s * (p - 2.0) / g2
        for i in range(n):
            res[a] += h[i, i, a]


def project_p_harmonic(double[:, :, ::1] grad, double[:, :, :, ::1] hess, double p):
    cdef Py_ssize_t k, a
    cdef Py_ssize_t N = grad.shape[0], n = grad.shape[1], d = grad.shape[2]
    cdef double g2, c, vr, vv
    cdef double[::1] w = np.empty(n)
    cdef double[::1] res = np.empty(d)
    with nogil:
        for k in range(N):
            g2 = _grad_sq(grad[k])
            for a in range(d):
                hess[k, n - 1, n - 1, a] = 0.0
            _residual(grad[k], hess[k], p, g2, w, res)
            c = (p - 2.0) / g2
            vr = 0.0
            vv = 0.0
            for a in range(d):
                vr += grad[k, n - 1, a] * res[a]
                vv += grad[k, n - 1, a] * grad[k, n - 1, a]
            for a in range(d):
                hess[k, n - 1, n - 1, a] = -res[a] + c * vr / (1.0 + c * vv) * grad[k, n - 1, a]


def p_residuals(double[:, :, ::1] grad, double[:, :, :, ::1] hess, double p):
    cdef Py_ssize_t k, a
    cdef Py_ssize_t N = grad.shape[0], n = grad.shape[1], d = grad.shape[2]
    cdef double m, g2
    out_arr = np.empty(N)
    cdef double[::1] out = out_arr
    cdef double[::1] w = np.empty(n)
    cdef double[::1] res = np.empty(d)
    with nogil:
        for k in range(N):
            g2 = _grad_sq(grad[k])
            _residual(grad[k], hess[k], p, g2, w, res)
            m = 0.0
            for a in range(d):
                if res[a] > m:
                    m = res[a]
                elif -res[a] > m:
                    m = -res[a]
            out[k] = m
    return out_arr


def jet_invariants(double[:, :, ::1] grad, double[:, :, :, ::1] hess):
    cdef Py_ssize_t k, i, j, a, b
    cdef Py_ssize_t N = grad.shape[0], n = grad.shape[1], d = grad.shape[2]
    cdef double g2, h2, s, dn2, inner2
    out_arr = np.empty((N, 4))
    cdef double[:, ::1] out = out_arr
    cdef double[::1] w = np.empty(n)
    with nogil:
        for k in range(N):
            g2 = _grad_sq(grad[k])
            h2 = 0.0
            for i in range(n):
                for j in range(n):
                    for a in range(d):
                        h2 += hess[k, i, j, a] * hess[k, i, j, a]
            dn2 = 0.0
            for i in range(n):
                s = 0.0
                for j in range(n):
                    for b in range(d):
                        s += grad[k, j, b] * hess[k, i, j, b]
                w[i] = s
                dn2 += s * s
            inner2 = 0.0
            for a in range(d):
                s = 0.0
                for i in range(n):
                    s += grad[k, i, a] * w[i]
                inner2 += s * s
            out[k, 0] = g2
            out[k, 1] = h2
            out[k, 2] = dn2 / g2
            out[k, 3] = inner2 / (g2 * g2)
    return out_arr
