"""Dense complex linear algebra helpers shared by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

# library-wide default tolerances
TOL = 1e-10
CLUSTER_TOL = 1e-8
REAL_PATH_TOL = 1e-14


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


class NotInImageError(ValueError):
    """Raised when a target matrix is not in the span of the representation."""


def as_cmatrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def partial_trace(m, site_dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every site not listed in ``keep`` (0-based site indices)."""
    m = as_cmatrix(m)
    dims = [int(d) for d in site_dims]
    total = int(np.prod(dims)) if dims else 1
    if m.shape != (total, total):
        raise DimensionError(f"matrix shape {m.shape} does not match site dims {dims}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"keep={keep} out of range for {len(dims)} sites")
    n = len(dims)
    t = m.reshape(dims + dims)
    # trace the discarded sites from the highest index down so axis numbers stay valid
    for s in sorted(set(range(n)) - set(keep), reverse=True):
        cur = t.ndim // 2
        t = np.trace(t, axis1=s, axis2=s + cur)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)


def hermitian_part(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return 0.5 * (m + m.conj().T)


def hermiticity_residual(m) -> float:
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.abs(m - m.conj().T).max())


def _check_hermitian(m, tol):
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError("matrix is not square")
    scale = max(1.0, float(np.abs(m).max()) if m.size else 1.0)
    res = hermiticity_residual(m)
    if res > tol * scale:
        raise NotHermitianError(f"matrix is not Hermitian (residual {res:.3e})")
    return hermitian_part(m)


@dataclass(frozen=True)
class EigReport:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    hermitian_flag: bool


def hermitian_eig(m, tol: float = TOL) -> EigReport:
    h = _check_hermitian(m, tol)
    w, v = np.linalg.eigh(h)
    return EigReport(w, v, True)


def is_psd(m, tol: float = TOL) -> bool:
    h = _check_hermitian(m, max(tol, TOL))
    if h.size == 0:
        return True
    return bool(np.linalg.eigvalsh(_real_if_negligible(h)).min() >= -tol)


def _real_if_negligible(h: np.ndarray) -> np.ndarray:
    """Real part of a Hermitian matrix when sqrt(dim) * ||Im||_F <= REAL_PATH_TOL.

    Eigenvalues move by at most ||Im||_2 <= ||Im||_F and the trace norm by at
    most sqrt(dim) * ||Im||_F, so the real symmetric solver stays within
    REAL_PATH_TOL while being several times faster.
    """
    if np.iscomplexobj(h) and np.linalg.norm(h.imag) * np.sqrt(h.shape[0]) <= REAL_PATH_TOL:
        return h.real
    return h


def min_eigenvalue(m) -> float:
    return float(np.linalg.eigvalsh(_real_if_negligible(hermitian_part(m))).min())


def trace_norm(m) -> float:
    """Schatten 1-norm of a Hermitian matrix."""
    return float(np.abs(np.linalg.eigvalsh(_real_if_negligible(hermitian_part(m)))).sum())


def trace_distance(a, b) -> float:
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return 0.5 * trace_norm(a - b)


def solve_linear(a, b, tol: float | None = None):
    """Least-squares solve of ``a @ x = b``; returns (x, residual)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    res = float(np.abs(a @ x - b).max()) if b.size else 0.0
    if tol is not None and res > tol:
        raise NotInImageError(f"linear system inconsistent (residual {res:.3e})")
    return x, res


def null_space(a, tol: float = TOL) -> np.ndarray:
    """Orthonormal basis of ker(a) as columns; ``tol`` is relative to the largest singular value."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return np.eye(a.shape[1], dtype=complex)
    return scipy.linalg.null_space(a, rcond=tol)


def pullback(rep_matrices, target, tol: float = 1e-9) -> np.ndarray:
    """Coefficients c with sum_i c_i R_i = target."""
    r = np.asarray(rep_matrices, dtype=complex)
    target = np.asarray(target, dtype=complex)
    n = r.shape[0]
    a = r.reshape(n, -1).T
    c, res = solve_linear(a, target.ravel())
    scale = max(1.0, float(np.abs(target).max()))
    if res > tol * scale:
        raise NotInImageError(f"element not in algebra image (residual {res:.3e})")
    return c


def psd_sqrt(m, tol: float = TOL) -> np.ndarray:
    h = _check_hermitian(m, tol)
    w, v = np.linalg.eigh(h)
    scale = max(1.0, float(np.abs(w).max()))
    if w.min() < -tol * scale:
        raise NotPSDError(f"negative eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def psd_inverse(m, tol: float = TOL) -> np.ndarray:
    h = _check_hermitian(m, tol)
    w, v = np.linalg.eigh(h)
    scale = max(1.0, float(np.abs(w).max()))
    if w.min() <= tol * scale:
        raise NotPSDError(f"matrix is not positive definite (min eigenvalue {w.min():.3e})")
    return (v / w) @ v.conj().T


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0
