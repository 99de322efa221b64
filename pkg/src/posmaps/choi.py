"""Linear maps between matrix algebras, stored by their Choi matrix.

A map ``T: M_din -> M_dout`` is represented by

    H = sum_ij e_ij (x) T(e_ij),

an operator on ``C^din (x) C^dout`` with the input index slow.  Block
``(i, j)`` of ``H`` (rows ``i*dout .. i*dout+dout-1``) is ``T(e_ij)``, i.e.
``H[i*dout + k, j*dout + l] = T(e_ij)[k, l]``.

Kraus operators ``W`` (``dout x din``) act as ``a -> sum_k W_k a W_k^*``.  The
vector of ``W`` matching a Choi eigenvector is its column stacking:
``v[i*dout + k] = W[k, i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, MalformedSpec, NotCompletelyPositive, ShapeMismatch
from .linalg import (
    EIG_TOL,
    HERMITIAN_TOL,
    as_matrix,
    eig_hermitian,
    matrix_unit,
    require_hermitian,
)


@dataclass(frozen=True, eq=False)
class MapRep:
    """A Hermiticity-preserving linear map ``M_dim_in -> M_dim_out``."""

    dim_in: int
    dim_out: int
    choi: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.dim_in < 1 or self.dim_out < 1:
            raise DimensionMismatch("map dimensions must be positive")
        n = self.dim_in * self.dim_out
        choi = as_matrix(self.choi)
        if choi.shape != (n, n):
            raise DimensionMismatch(
                f"Choi matrix of a {self.dim_in}->{self.dim_out} map must be {n}x{n}, got {choi.shape}"
            )
        choi = require_hermitian(choi, HERMITIAN_TOL).copy()
        choi.setflags(write=False)
        object.__setattr__(self, "choi", choi)

    def __call__(self, a) -> np.ndarray:
        return apply_map(self, a)

    def block(self, i: int, j: int) -> np.ndarray:
        """``T(e_ij)``."""
        d = self.dim_out
        return self.choi[i * d:(i + 1) * d, j * d:(j + 1) * d].copy()

    def _same_dims(self, other: MapRep) -> None:
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out):
            raise DimensionMismatch("cannot combine maps of different dimensions")

    def __add__(self, other: MapRep) -> MapRep:
        self._same_dims(other)
        return MapRep(self.dim_in, self.dim_out, self.choi + other.choi)

    def __sub__(self, other: MapRep) -> MapRep:
        self._same_dims(other)
        return MapRep(self.dim_in, self.dim_out, self.choi - other.choi)

    def __mul__(self, scalar: float) -> MapRep:
        return MapRep(self.dim_in, self.dim_out, float(scalar) * self.choi)

    __rmul__ = __mul__


@dataclass(frozen=True)
class MapSpec:
    """A map given by its images on matrix units: ``images[i*dim_in + j] = T(e_ij)``."""

    dim_in: int
    dim_out: int
    images: Sequence


@dataclass(frozen=True, eq=False)
class KrausSet:
    operators: tuple

    @property
    def dim_in(self) -> int:
        return self.operators[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self) -> int:
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)


def choi_of_map(spec: MapSpec, tol: float = HERMITIAN_TOL) -> MapRep:
    """Assemble the Choi matrix from the images of the matrix units."""
    din, dout = spec.dim_in, spec.dim_out
    if din < 1 or dout < 1:
        raise MalformedSpec("dimensions must be positive")
    if len(spec.images) != din * din:
        raise MalformedSpec(f"expected {din * din} images, got {len(spec.images)}")
    blocks = []
    for idx, img in enumerate(spec.images):
        m = np.asarray(img, dtype=complex)
        if m.shape != (dout, dout):
            raise MalformedSpec(f"images[{idx}] has shape {m.shape}, expected {(dout, dout)}")
        blocks.append(m)
    for i in range(din):
        for j in range(din):
            defect = np.max(np.abs(blocks[i * din + j].conj().T - blocks[j * din + i]))
            if defect > tol:
                raise MalformedSpec(
                    f"map is not Hermiticity preserving: T(e_{i}{j})* != T(e_{j}{i}) (defect {defect:.2e})"
                )
    H = np.block([[blocks[i * din + j] for j in range(din)] for i in range(din)])
    return MapRep(din, dout, H)


def spec_of_map(T: MapRep) -> MapSpec:
    return MapSpec(T.dim_in, T.dim_out, [T.block(i, j) for i in range(T.dim_in) for j in range(T.dim_in)])


def map_from_function(f: Callable, dim_in: int, dim_out: int) -> MapRep:
    """Choi representation of a linear callable ``f: M_dim_in -> M_dim_out``."""
    images = [np.asarray(f(matrix_unit(i, j, dim_in)), dtype=complex) for i in range(dim_in) for j in range(dim_in)]
    return choi_of_map(MapSpec(dim_in, dim_out, images))


def apply_map(T: MapRep, a) -> np.ndarray:
    """``T(a) = sum_ij a_ij T(e_ij)``."""
    a = as_matrix(a)
    if a.shape != (T.dim_in, T.dim_in):
        raise DimensionMismatch(f"input must be {T.dim_in}x{T.dim_in}, got {a.shape}")
    H4 = T.choi.reshape(T.dim_in, T.dim_out, T.dim_in, T.dim_out)
    return np.einsum("ij,ikjl->kl", a, H4)


def kraus_from_choi(T: MapRep, tol: float = EIG_TOL) -> KrausSet:
    """Kraus operators from the spectral decomposition of a PSD Choi matrix.

    Eigenvalues above ``tol * lambda_max`` are kept, in descending order.
    """
    w, V = eig_hermitian(T.choi)
    top = max(float(w[0]), 0.0)
    if w[-1] < -tol * max(top, 1.0):
        raise NotCompletelyPositive(f"Choi matrix has eigenvalue {w[-1]:.3e} < 0; map is not CP")
    ops = []
    for lam, v in zip(w, V.T):
        if lam > tol * top:
            ops.append(np.sqrt(lam) * v.reshape(T.dim_in, T.dim_out).T)
    if not ops:
        ops.append(np.zeros((T.dim_out, T.dim_in), dtype=complex))
    return KrausSet(tuple(ops))


def map_from_kraus(ks) -> MapRep:
    """Choi matrix of ``a -> sum_k W_k a W_k^*``."""
    ops = [as_matrix(W) for W in (ks.operators if isinstance(ks, KrausSet) else ks)]
    if not ops:
        raise ShapeMismatch("empty Kraus set")
    shape = ops[0].shape
    for k, W in enumerate(ops):
        if W.shape != shape:
            raise ShapeMismatch(f"Kraus operator {k} has shape {W.shape}, expected {shape}")
    dout, din = shape
    vecs = np.array([W.T.reshape(-1) for W in ops])
    return MapRep(din, dout, vecs.T @ vecs.conj())


def apply_kraus(ks, a) -> np.ndarray:
    ops = ks.operators if isinstance(ks, KrausSet) else ks
    return sum(W @ a @ W.conj().T for W in ops)


def dual_map(T: MapRep) -> MapRep:
    """The map ``S: M_dim_out -> M_dim_in`` with ``Tr(S(b) a) = Tr(b T(a))``."""
    H4 = T.choi.reshape(T.dim_in, T.dim_out, T.dim_in, T.dim_out)
    n = T.dim_in * T.dim_out
    return MapRep(T.dim_out, T.dim_in, H4.transpose(3, 2, 1, 0).reshape(n, n))


def compose(S: MapRep, T: MapRep) -> MapRep:
    """``S o T`` (apply ``T`` first)."""
    if S.dim_in != T.dim_out:
        raise DimensionMismatch("cannot compose: inner dimensions differ")
    return map_from_function(lambda a: apply_map(S, apply_map(T, a)), T.dim_in, S.dim_out)


def is_unital(T: MapRep, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(apply_map(T, np.eye(T.dim_in)) - np.eye(T.dim_out))) <= tol)


def is_trace_preserving(T: MapRep, tol: float = 1e-10) -> bool:
    return is_unital(dual_map(T), tol)


# --- named maps -------------------------------------------------------------


def identity_map(d: int = 2) -> MapRep:
    return map_from_function(lambda a: a, d, d)


def transpose_map(d: int = 2) -> MapRep:
    return map_from_function(lambda a: a.T, d, d)


def depolarizing_map(d: int = 2) -> MapRep:
    """``a -> Tr(a) I / d``."""
    return map_from_function(lambda a: np.trace(a) * np.eye(d) / d, d, d)
