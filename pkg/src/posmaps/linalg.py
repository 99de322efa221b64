"""Dense complex linear algebra on small matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Tensor products
use the ``np.kron`` convention: in ``A (x) B`` the index of the first factor is
the slow one, so a basis vector of ``C^d1 (x) C^d2`` is addressed as
``i * d2 + k``.

The Hermitian eigensolver is a cyclic Jacobi method.  It is meant for the
desk-scale matrices used in this package (dimension up to a few dozen).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import DimensionMismatch, NotHermitian

HERMITIAN_TOL = 1e-10
EIG_TOL = 1e-9
PSD_TOL = 1e-9

_OFFDIAG_STOP = 1e-13
_MAX_SWEEPS = 60
_PHASE_EPS = 1e-10


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a 2-D complex array (no copy when already one)."""
    arr = np.asarray(M, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    return arr


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.size < 1:
        raise DimensionMismatch(f"expected a non-empty vector, got shape {arr.shape}")
    return arr


def _require_square(M: np.ndarray) -> None:
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")


def hermiticity_defect(M) -> float:
    """Largest entry of ``|M - M^*|``."""
    M = as_matrix(M)
    _require_square(M)
    return float(np.max(np.abs(M - M.conj().T)))


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_defect(M) <= tol


def require_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    M = as_matrix(M)
    _require_square(M)
    defect = hermiticity_defect(M)
    if defect > tol:
        raise NotHermitian(f"matrix is not Hermitian: max |M - M*| = {defect:.3e} > {tol:.1e}")
    return M


class EigenDecomposition(NamedTuple):
    """Eigenvalues sorted descending; eigenvectors are the matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


@njit(cache=True)
def _jacobi_kernel(A, stop, max_sweeps):
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += A[p, q].real ** 2 + A[p, q].imag ** 2
        if np.sqrt(off) <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                ph = (apq / mag).conjugate()
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # plane rotation J = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                j00 = c
                j01 = s
                j10 = -s * ph
                j11 = c * ph
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = akp * j00 + akq * j10
                    A[k, q] = akp * j01 + akq * j11
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = j00 * apk + j10.conjugate() * aqk
                    A[q, k] = j01 * apk + j11.conjugate() * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = app - t * mag
                A[q, q] = aqq + t * mag
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = vkp * j00 + vkq * j10
                    V[k, q] = vkp * j01 + vkq * j11
    w = np.empty(n)
    for k in range(n):
        w[k] = A[k, k].real
    return w, V


def _jacobi(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    scale = float(np.linalg.norm(A))
    if A.shape[0] == 1 or scale == 0.0:
        return A.diagonal().real.copy(), np.eye(A.shape[0], dtype=complex)
    return _jacobi_kernel(np.array(A, dtype=np.complex128), _OFFDIAG_STOP * scale, _MAX_SWEEPS)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its first non-negligible component is real and positive."""
    for comp in v:
        mag = abs(comp)
        if mag > _PHASE_EPS:
            return v * (comp.conjugate() / mag)
    return v


def _vector_key(v: np.ndarray) -> tuple:
    r = np.round(v, 10)
    return tuple(x for comp in r for x in (comp.real, comp.imag))


def eig_hermitian(M, hermitian_tol: float = HERMITIAN_TOL, eig_tol: float = EIG_TOL) -> EigenDecomposition:
    """Full spectral decomposition of a Hermitian matrix.

    Eigenvalues come out in descending order.  Eigenvectors are phase-fixed
    (first non-negligible component real positive); eigenvalues equal within
    ``eig_tol * max(1, ||M||)`` are ordered by comparing their eigenvectors
    lexicographically, larger first.
    """
    M = require_hermitian(M, hermitian_tol)
    H = 0.5 * (M + M.conj().T)
    w, V = _jacobi(H)
    V = np.column_stack([_fix_phase(V[:, k]) for k in range(V.shape[1])])
    tie = eig_tol * max(1.0, float(np.max(np.abs(w))))

    def compare(i, j):
        if abs(w[i] - w[j]) > tie:
            return -1 if w[i] > w[j] else 1
        ki, kj = _vector_key(V[:, i]), _vector_key(V[:, j])
        if ki == kj:
            return 0
        return -1 if ki > kj else 1

    # plain descending sort first so tie clusters are contiguous for the comparator
    order = sorted(sorted(range(len(w)), key=lambda k: -w[k]), key=cmp_to_key(compare))
    return EigenDecomposition(w[order], V[:, order])


def eigvals_hermitian(M, hermitian_tol: float = HERMITIAN_TOL) -> np.ndarray:
    return eig_hermitian(M, hermitian_tol).eigenvalues


def lowest_eigpair(M) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue of a Hermitian matrix and a phase-fixed unit eigenvector.

    Skips validation and full sorting; intended for inner optimisation loops
    where ``M`` is Hermitian by construction.
    """
    M = np.asarray(M, dtype=complex)
    w, V = _jacobi(0.5 * (M + M.conj().T))
    k = int(np.argmin(w))
    return float(w[k]), _fix_phase(V[:, k])


def kron(A, B) -> np.ndarray:
    """Tensor product with the first factor as the slow index."""
    return np.kron(as_matrix(A), as_matrix(B))


def partial_transpose(M, d1: int, d2: int, factor: str = "first") -> np.ndarray:
    """Transpose one tensor factor of an operator on ``C^d1 (x) C^d2``.

    For ``factor="first"``: ``out[(i,k),(j,l)] = M[(j,k),(i,l)]``.
    """
    M = as_matrix(M)
    n = d1 * d2
    if M.shape != (n, n):
        raise DimensionMismatch(f"expected a {n}x{n} matrix for dims ({d1}, {d2}), got {M.shape}")
    T = M.reshape(d1, d2, d1, d2)
    if factor == "first":
        T = T.transpose(2, 1, 0, 3)
    elif factor == "second":
        T = T.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"factor must be 'first' or 'second', got {factor!r}")
    return T.reshape(n, n).copy()


def pseudo_inverse(M, tol: float = PSD_TOL) -> np.ndarray:
    """Spectral generalized inverse of a Hermitian matrix.

    Eigenvalues with ``|lambda| <= tol * lambda_max`` are treated as zero.
    """
    dec = eig_hermitian(M, hermitian_tol=max(tol, HERMITIAN_TOL))
    w, V = dec
    top = float(np.max(np.abs(w))) if w.size else 0.0
    if top == 0.0:
        return np.zeros_like(V)
    keep = np.abs(w) > tol * top
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / w[keep]
    return (V * inv) @ V.conj().T


def sqrt_psd(M, tol: float = PSD_TOL) -> np.ndarray:
    """Principal square root of a PSD matrix; tiny negative eigenvalues are clipped."""
    w, V = eig_hermitian(M, hermitian_tol=max(tol, HERMITIAN_TOL))
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


@dataclass(frozen=True)
class PsdCheck:
    """Verdict of :func:`is_psd`; truthy iff the matrix is PSD within tolerance."""

    psd: bool
    min_eig: float
    max_eig: float
    vector: np.ndarray

    def __bool__(self) -> bool:
        return self.psd


def is_psd(M, tol: float = PSD_TOL) -> PsdCheck:
    """PSD test: ``lambda_min >= -tol * max(1, lambda_max)``.

    The certificate carries the smallest eigenvalue and its eigenvector.
    """
    w, V = eig_hermitian(M, hermitian_tol=max(tol, HERMITIAN_TOL))
    lmin, lmax = float(w[-1]), float(w[0])
    return PsdCheck(lmin >= -tol * max(1.0, lmax), lmin, lmax, V[:, -1])


def projector(v) -> np.ndarray:
    """``|v><v| / <v|v>``."""
    v = as_vector(v)
    return np.outer(v, v.conj()) / np.vdot(v, v).real


def ket(i: int, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def matrix_unit(i: int, j: int, rows: int, cols: int | None = None) -> np.ndarray:
    """The elementary matrix ``e_ij = |i><j|``."""
    m = np.zeros((rows, rows if cols is None else cols), dtype=complex)
    m[i, j] = 1.0
    return m
