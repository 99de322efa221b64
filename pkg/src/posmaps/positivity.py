"""Positivity classes of a map: CP, co-CP, and plain positivity.

Complete positivity and co-complete positivity are eigenvalue tests on the
Choi matrix and on its partial transpose.  Plain positivity is equivalent to
block positivity of the Choi matrix,

    <x (x) y, H x (x) y> >= 0   for all x, y,

which is checked here by a multistart see-saw.  A negative value returned by
the see-saw is an exact disproof (it comes with the vectors ``x, y``); a
non-negative one is only evidence, hence the verdict ``PositiveUndetermined``
for maps that pass the sampler but are neither CP nor co-CP.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .choi import MapRep, apply_map
from .errors import DimensionMismatch
from .linalg import (
    PSD_TOL,
    as_matrix,
    is_psd,
    lowest_eigpair,
    partial_transpose,
    pseudo_inverse,
    require_hermitian,
    _fix_phase,
)

# dimension pairs where every positive map is decomposable
DECOMPOSABLE_DIMS = frozenset({(2, 2), (2, 3), (3, 2)})


class Verdict(str, enum.Enum):
    NOT_POSITIVE = "NotPositive"
    CP_ONLY = "CPOnly"
    COCP_ONLY = "CoCPOnly"
    CP_AND_COCP = "CPAndCoCP"
    POSITIVE_UNDETERMINED = "PositiveUndetermined"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SeesawConfig:
    starts: int = 64
    max_iters: int = 200
    seed: int = 0
    tol: float = 1e-9

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


class SeesawResult(NamedTuple):
    value: float
    x: np.ndarray
    y: np.ndarray


def product_expectation(H, x, y) -> float:
    """``<x (x) y, H x (x) y>`` for unit ``x, y``."""
    v = np.kron(x, y)
    return float(np.vdot(v, as_matrix(H) @ v).real)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def structured_starts(d1: int, d2: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """``2*d1*d2`` deterministic start pairs: basis vectors and Fourier vectors."""
    eye1, eye2 = np.eye(d1, dtype=complex), np.eye(d2, dtype=complex)
    f1 = np.exp(2j * np.pi * np.outer(np.arange(d1), np.arange(d1)) / d1) / np.sqrt(d1)
    f2 = np.exp(2j * np.pi * np.outer(np.arange(d2), np.arange(d2)) / d2) / np.sqrt(d2)
    pairs = [(eye1[:, i], eye2[:, k]) for i in range(d1) for k in range(d2)]
    pairs += [(f1[:, i], f2[:, k]) for i in range(d1) for k in range(d2)]
    return pairs


def random_start(d1: int, d2: int, seed: int, index: int) -> tuple[np.ndarray, np.ndarray]:
    # sub-seed depends only on (seed, index) so runs are schedule independent
    rng = np.random.default_rng([seed, index])
    x = rng.normal(size=d1) + 1j * rng.normal(size=d1)
    y = rng.normal(size=d2) + 1j * rng.normal(size=d2)
    return _unit(x), _unit(y)


def _seesaw_run(H4: np.ndarray, x: np.ndarray, y: np.ndarray, max_iters: int, tol: float):
    value = np.inf
    for _ in range(max_iters):
        # x-step: minimise over x with y fixed, then the y-step with x fixed
        _, x = lowest_eigpair(np.einsum("k,ikjl,l->ij", y.conj(), H4, y))
        new, y = lowest_eigpair(np.einsum("i,ikjl,j->kl", x.conj(), H4, x))
        improved = value - new
        value = new
        if improved < tol:
            break
    return value, x, y


def min_product_expectation(H, d1: int, d2: int, cfg: SeesawConfig = SeesawConfig()) -> SeesawResult:
    """Upper bound on ``min <x (x) y, H x (x) y>`` over unit product vectors.

    Each run alternates exact minimisations: ``x`` is the lowest eigenvector of
    ``(1 (x) y)^* H (1 (x) y)``, then ``y`` the lowest eigenvector of
    ``V_x^* H V_x``.  Runs start from :func:`structured_starts` followed by
    ``cfg.starts`` seeded random pairs; the best run wins, earliest on ties.
    """
    H = require_hermitian(H)
    if H.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch(f"H must be {d1 * d2}x{d1 * d2} for dims ({d1}, {d2})")
    H4 = H.reshape(d1, d2, d1, d2)
    starts = structured_starts(d1, d2)
    starts += [random_start(d1, d2, cfg.seed, k) for k in range(cfg.starts)]
    best = None
    for x0, y0 in starts:
        value, x, y = _seesaw_run(H4, x0, y0, cfg.max_iters, cfg.tol)
        if best is None or value < best[0]:
            best = (value, x, y)
    _, x, y = best
    x, y = _fix_phase(_unit(x)), _fix_phase(_unit(y))
    return SeesawResult(product_expectation(H, x, y), x, y)


@dataclass(frozen=True)
class Violated:
    """Certificate that a map is not positive: ``y^* T(|x̄><x̄|) y = value < 0``."""

    x: np.ndarray
    y: np.ndarray
    value: float

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class NoViolationFound:
    min_value: float
    x: np.ndarray
    y: np.ndarray

    def __bool__(self) -> bool:
        return True


def is_block_positive(T: MapRep, cfg: SeesawConfig = SeesawConfig()):
    """Search for a product vector with negative Choi expectation.

    Returns :class:`Violated` (falsy) with a certificate re-checked through
    :func:`apply_map`, or :class:`NoViolationFound` (truthy).
    """
    res = min_product_expectation(T.choi, T.dim_in, T.dim_out, cfg)
    if res.value < -cfg.tol:
        xbar = res.x.conj()
        check = float(np.vdot(res.y, apply_map(T, np.outer(xbar, xbar.conj())) @ res.y).real)
        if check < -cfg.tol:
            return Violated(res.x, res.y, check)
    return NoViolationFound(res.value, res.x, res.y)


def is_completely_positive(T: MapRep, tol: float = PSD_TOL) -> tuple[bool, float]:
    chk = is_psd(T.choi, tol)
    return chk.psd, chk.min_eig


def is_co_completely_positive(T: MapRep, tol: float = PSD_TOL) -> tuple[bool, float]:
    chk = is_psd(partial_transpose(T.choi, T.dim_in, T.dim_out, "first"), tol)
    return chk.psd, chk.min_eig


def ando_choi_psd_2block(A11, A12, A22, tol: float = PSD_TOL) -> bool:
    """Schur-complement test for ``[[A11, A12], [A12^*, A22]] >= 0``.

    True iff ``A11, A22 >= 0``, ``(1 - A22 A22^+) A12^* = 0`` and
    ``A11 - A12 A22^+ A12^* >= 0``, with ``A22^+`` the generalized inverse.
    """
    A11 = require_hermitian(A11, max(tol, 1e-10))
    A22 = require_hermitian(A22, max(tol, 1e-10))
    A12 = as_matrix(A12)
    if A12.shape != (A11.shape[0], A22.shape[0]):
        raise DimensionMismatch(f"A12 must be {A11.shape[0]}x{A22.shape[0]}, got {A12.shape}")
    scale = max(1.0, float(np.linalg.norm(A11, 2)), float(np.linalg.norm(A22, 2)), float(np.linalg.norm(A12, 2)))
    if not is_psd(A11, tol) or not is_psd(A22, tol):
        return False
    A22p = pseudo_inverse(A22, tol)
    leak = (np.eye(A22.shape[0]) - A22 @ A22p) @ A12.conj().T
    if np.linalg.norm(leak, 2) > np.sqrt(tol) * scale:
        return False
    schur = A11 - A12 @ A22p @ A12.conj().T
    return is_psd(0.5 * (schur + schur.conj().T), tol * scale).psd


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    cp_min_eig: float
    cocp_min_eig: float
    block_min: float
    witness_vectors: Optional[tuple] = None
    decomposable: Optional[bool] = None

    @property
    def positive_screen_passed(self) -> bool:
        return self.verdict is not Verdict.NOT_POSITIVE


def classify(T: MapRep, cfg: SeesawConfig = SeesawConfig(), tol: Optional[float] = None) -> Classification:
    """Run the CP, co-CP and block-positivity tests and combine the verdicts.

    For ``(dim_in, dim_out)`` in :data:`DECOMPOSABLE_DIMS` a map with no
    violation found is annotated ``decomposable=True``.
    """
    tol = cfg.tol if tol is None else tol
    cp, cp_min = is_completely_positive(T, tol)
    cocp, cocp_min = is_co_completely_positive(T, tol)
    block = is_block_positive(T, cfg)
    if isinstance(block, Violated):
        return Classification(Verdict.NOT_POSITIVE, cp_min, cocp_min, block.value, (block.x, block.y))
    if cp and cocp:
        verdict = Verdict.CP_AND_COCP
    elif cp:
        verdict = Verdict.CP_ONLY
    elif cocp:
        verdict = Verdict.COCP_ONLY
    else:
        verdict = Verdict.POSITIVE_UNDETERMINED
    decomposable = True if (T.dim_in, T.dim_out) in DECOMPOSABLE_DIMS else None
    return Classification(verdict, cp_min, cocp_min, block.min_value, None, decomposable)
