"""Batch kernels, compiled when the Cython extension is built, numpy otherwise.

The backend is chosen once at import. ``use_backend`` switches it explicitly
(tests and the benchmark run both).
"""
from __future__ import annotations

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active = _BACKENDS.get("cython", _pykernels)


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend() -> str:
    return _active.BACKEND


def use_backend(name: str) -> None:
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}") from None


def get_backend(name: str):
    return _BACKENDS[name]


def _as_batch(grad, hess):
    grad = np.ascontiguousarray(grad, dtype=float)
    hess = np.ascontiguousarray(hess, dtype=float)
    if grad.ndim != 3 or hess.ndim != 4 or hess.shape[:2] != (grad.shape[0], grad.shape[1]) \
            or hess.shape[2] != grad.shape[1] or hess.shape[3] != grad.shape[2]:
        raise ValueError(f"bad batch shapes {grad.shape} / {hess.shape}")
    return grad, hess


def f_grid_argmin(p: float, n: int, npts: int) -> tuple[int, float]:
    """Index and value of the smallest f on the uniform grid of ``npts`` points in [0, 1]."""
    return _active.f_grid_argmin(float(p), int(n), int(npts))


def project_p_harmonic(grad, hess, p: float) -> np.ndarray:
    """Overwrite hess[:, n-1, n-1, :] so each jet satisfies the p-harmonic equation.

    Returns the (possibly copied) hess array that was modified.
    """
    grad, hess = _as_batch(grad, hess)
    _active.project_p_harmonic(grad, hess, float(p))
    return hess


def p_residuals(grad, hess, p: float) -> np.ndarray:
    grad, hess = _as_batch(grad, hess)
    return np.asarray(_active.p_residuals(grad, hess, float(p)))


def jet_invariants(grad, hess) -> np.ndarray:
    """Columns: |grad u|^2, |hess u|^2, |grad|grad u||^2, |<grad u/|grad u|, grad|grad u|>|^2."""
    grad, hess = _as_batch(grad, hess)
    return np.asarray(_active.jet_invariants(grad, hess))
