"""Positive maps on ``M_2``: maps in a maximal face, Størmer's extremal maps,
the explicit CP + co-CP splitting, the local (GNS) decomposition, and the
``M_2 -> M_3`` block checks.

Throughout, ``xi_basis`` and ``eta_basis`` are unitary matrices whose columns
are the orthonormal bases ``(xi_1, xi_2)`` of the input space and
``(eta_1, eta_2[, eta_3])`` of the output space, and the face in question is
``F_max(p_{xi_1}, eta_1)``.  Matrices written "in the product basis" are
indexed by ``xi_i (x) eta_k`` with the ``xi`` index slow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .choi import MapRep, apply_map, dual_map, is_unital, map_from_function
from .errors import (
    BlockPositivityViolated,
    ConstraintViolated,
    DegenerateGNS,
    DegenerateParameter,
    DimensionMismatch,
    ExtremalityConstraintViolated,
    NotInFace,
    NotUnital,
    PatternMismatch,
    SplitInvalid,
)
from .faces import FaceSpecP, in_maximal_face_P
from .linalg import as_matrix, as_vector, is_psd, partial_transpose, pseudo_inverse, sqrt_psd
from .positivity import SeesawConfig, Violated, is_block_positive

SLICE_TOL = 1e-10


def _check_unitary(U, d: int, name: str) -> np.ndarray:
    U = as_matrix(U)
    if U.shape != (d, d):
        raise DimensionMismatch(f"{name} must be {d}x{d}, got {U.shape}")
    if np.max(np.abs(U.conj().T @ U - np.eye(d))) > 1e-10:
        raise ValueError(f"{name} columns must be orthonormal")
    return U


def to_standard_basis(Hb, xi_basis, eta_basis) -> np.ndarray:
    """Choi matrix in the standard basis from its form in the product basis."""
    U = np.kron(np.conj(xi_basis), eta_basis)
    return U @ as_matrix(Hb) @ U.conj().T


def choi_in_bases(T: MapRep, xi_basis=None, eta_basis=None) -> np.ndarray:
    """``H[(i,k),(j,l)] = <eta_k, T(|xi_i><xi_j|) eta_l>``."""
    Ux = np.eye(T.dim_in) if xi_basis is None else _check_unitary(xi_basis, T.dim_in, "xi_basis")
    Ue = np.eye(T.dim_out) if eta_basis is None else _check_unitary(eta_basis, T.dim_out, "eta_basis")
    U = np.kron(np.conj(Ux), Ue)
    return U.conj().T @ T.choi @ U


def _from_product_basis(Hb, xi_basis, eta_basis) -> MapRep:
    H = to_standard_basis(Hb, xi_basis, eta_basis)
    return MapRep(2, eta_basis.shape[0], 0.5 * (H + H.conj().T))


# --- maps in a maximal face ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class FaceMapParams:
    lam: float
    y: complex
    z: complex
    t: complex = 0.0
    xi_basis: np.ndarray = field(default_factory=lambda: np.eye(2, dtype=complex))
    eta_basis: np.ndarray = field(default_factory=lambda: np.eye(2, dtype=complex))

    def __post_init__(self):
        lam = float(self.lam)
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {lam}")
        object.__setattr__(self, "lam", lam)
        for name in ("y", "z", "t"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "xi_basis", _check_unitary(self.xi_basis, 2, "xi_basis"))
        object.__setattr__(self, "eta_basis", _check_unitary(self.eta_basis, 2, "eta_basis"))

    @property
    def xi(self) -> np.ndarray:
        return self.xi_basis[:, 0]

    @property
    def eta(self) -> np.ndarray:
        return self.eta_basis[:, 0]


def face_choi_product_basis(lam: float, y: complex, z: complex, t: complex) -> np.ndarray:
    """Choi matrix of a unital map in ``F_max(p_xi1, eta1)``, product basis."""
    yb, zb, tb = np.conj(y), np.conj(z), np.conj(t)
    return np.array(
        [
            [0, 0, 0, y],
            [0, lam, zb, t],
            [0, z, 1, 0],
            [yb, tb, 0, 1 - lam],
        ],
        dtype=complex,
    )


def face_map_2d(p: FaceMapParams, check: bool = True, cfg: SeesawConfig = SeesawConfig()) -> MapRep:
    """The unital map with

        T(|xi1><xi1|) = lam |eta2><eta2|
        T(|xi1><xi2|) = y |eta1><eta2| + conj(z) |eta2><eta1| + t |eta2><eta2|
        T(|xi2><xi2|) = |eta1><eta1| + (1 - lam) |eta2><eta2|

    With ``check`` the see-saw is run on the result and
    ``BlockPositivityViolated`` is raised if the parameters give a map that
    is not positive.
    """
    T = _from_product_basis(face_choi_product_basis(p.lam, p.y, p.z, p.t), p.xi_basis, p.eta_basis)
    if check:
        res = is_block_positive(T, cfg)
        if isinstance(res, Violated):
            raise BlockPositivityViolated(
                f"parameters give a non-positive map (product expectation {res.value:.3e})",
                res.value,
                res.x,
                res.y,
            )
    return T


# --- Størmer's extremal maps -------------------------------------------------------


@dataclass(frozen=True)
class StormerParams:
    alpha: complex
    beta: complex
    gamma: float
    delta: float
    epsilon: complex

    def constraint_defects(self) -> dict:
        a, b = abs(self.alpha), abs(self.beta)
        if self.gamma != 0:
            return {
                "epsilon": abs(abs(self.epsilon) ** 2 - 2 * self.gamma * (self.delta - a**2 - b**2)),
                "alpha_beta": abs(a + b - np.sqrt(max(self.delta, 0.0))),
            }
        return {"unit_coefficient": min(abs(a - 1), abs(b - 1))}


def stormer_extremal(p: StormerParams, tol: float = SLICE_TOL) -> MapRep:
    """``[[a, b], [c, d]] -> [[a, alpha b + beta c], [conj(alpha) c + conj(beta) b, gamma a + eps b + conj(eps) c + delta d]]``."""
    if p.gamma < 0 or p.delta < 0:
        raise ExtremalityConstraintViolated("gamma and delta must be non-negative")
    for name, defect in p.constraint_defects().items():
        if defect > tol:
            raise ExtremalityConstraintViolated(f"constraint '{name}' violated by {defect:.3e}")
    al, be, ga, de, ep = complex(p.alpha), complex(p.beta), p.gamma, p.delta, complex(p.epsilon)

    def f(m):
        a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        return np.array(
            [
                [a, al * b + be * c],
                [np.conj(al) * c + np.conj(be) * b, ga * a + ep * b + np.conj(ep) * c + de * d],
            ]
        )

    return map_from_function(f, 2, 2)


def stormer_choi_pattern(p: StormerParams) -> np.ndarray:
    al, be, ep = complex(p.alpha), complex(p.beta), complex(p.epsilon)
    return np.array(
        [
            [1, 0, 0, al],
            [0, p.gamma, np.conj(be), ep],
            [0, be, 0, 0],
            [np.conj(al), np.conj(ep), 0, p.delta],
        ],
        dtype=complex,
    )


# --- the two split forms -----------------------------------------------------------


class SplitKind(str, enum.Enum):
    COCP = "cocp"
    CP = "cp"


def split_form_matrix(kind, lam: float, q: float, w: complex, t: complex) -> np.ndarray:
    """Assemble a split-form Choi matrix.

    ``CP``:   coupling ``w`` between ``xi1 (x) eta2`` and ``xi2 (x) eta1``.
    ``COCP``: coupling ``w`` between ``xi1 (x) eta1`` and ``xi2 (x) eta2``.
    """
    kind = SplitKind(kind)
    wb, tb, r = np.conj(w), np.conj(t), 0.5 - lam
    if kind is SplitKind.CP:
        rows = [[0, 0, 0, 0], [0, lam, wb, t], [0, w, q, 0], [0, tb, 0, r]]
    else:
        rows = [[0, 0, 0, w], [0, lam, 0, t], [0, 0, q, 0], [wb, tb, 0, r]]
    return np.array(rows, dtype=complex)


def ando_choi_inequality(lam: float, q: float, z: complex, t: complex, tol: float = 1e-9) -> bool:
    """``lam >= |z|^2 / q + |t|^2 / (1/2 - lam)`` with generalized inverses.

    The diagonal entries ``q`` and ``1/2 - lam`` must be non-negative; a zero
    denominator forces the matching numerator to vanish.
    """
    r = 0.5 - lam
    if lam < -tol or q < -tol or r < -tol:
        return False
    total = 0.0
    for num, den in ((abs(z) ** 2, q), (abs(t) ** 2, r)):
        if den > tol:
            total += num / den
        elif num > tol:
            return False
    return lam >= total - tol


@dataclass(frozen=True)
class SplitFormCheck:
    kind: SplitKind
    inequality: bool
    psd: bool
    lam: float
    q: float
    z: complex
    t: complex
    min_eig: float

    def __bool__(self) -> bool:
        return self.inequality and self.psd


def split_form_check(H, kind, tol: float = 1e-9) -> SplitFormCheck:
    """Check a split-form matrix: the scalar inequality and the PSD test.

    For ``CP`` both are evaluated on ``H`` itself.  For ``COCP`` the partial
    transpose is taken first; it must land in the ``CP`` pattern.
    """
    kind = SplitKind(kind)
    M = H.choi if isinstance(H, MapRep) else as_matrix(H)
    if M.shape != (4, 4):
        raise PatternMismatch(f"split forms are 4x4, got {M.shape}")
    if kind is SplitKind.COCP:
        zero = [(0, 0), (0, 1), (0, 2), (1, 2), (2, 3)]
        _require_zeros(M, zero, tol, "co-CP split form")
        M = partial_transpose(M, 2, 2, "first")
    _require_zeros(M, [(0, 0), (0, 1), (0, 2), (0, 3), (2, 3)], tol, "CP split form")
    lam, q, r = M[1, 1].real, M[2, 2].real, M[3, 3].real
    if abs(lam + r - 0.5) > tol:
        raise PatternMismatch("diagonal entries at xi1(x)eta2 and xi2(x)eta2 must sum to 1/2")
    z, t = M[2, 1], M[1, 3]
    chk = is_psd(M, tol)
    return SplitFormCheck(kind, bool(ando_choi_inequality(lam, q, z, t, tol)), chk.psd, float(lam), float(q), complex(z), complex(t), chk.min_eig)


def _require_zeros(M, positions, tol, what):
    for i, j in positions:
        if abs(M[i, j]) > tol or abs(M[j, i]) > tol:
            raise PatternMismatch(f"{what}: entry ({i}, {j}) must vanish, got {M[i, j]}")


# --- explicit CP + co-CP decomposition of an extremal face map ------------------------------


class PartParams(NamedTuple):
    lam: float
    a: float
    t: complex
    b: float


@dataclass(frozen=True, eq=False)
class ExtremalDecomposition:
    H_T: MapRep
    H_T1: MapRep  # co-CP part
    H_T2: MapRep  # CP part
    c: complex
    params1: PartParams
    params2: PartParams
    checks: dict
    cocp_min_eig: float
    cp_min_eig: float

    @property
    def valid(self) -> bool:
        return all(self.checks.values())

    def failed_checks(self) -> list:
        return [k for k, ok in self.checks.items() if not ok]


def decompose_extremal(p: FaceMapParams, tol: float = SLICE_TOL, psd_tol: float = 1e-9) -> ExtremalDecomposition:
    """Split a face map on the slice ``|y| + |z| = sqrt(lam)`` into co-CP + CP parts.

    With ``s = sqrt(lam)``:

        co-CP part: lam1 = |y| s, a1 = |y| / s, t1 = t / 2, b1 = |z| (1 - lam) / s
        CP part:    lam2 = |z| s, a2 = |z| / s, t2 = t / 2, b2 = |y| (1 - lam) / s

    and the coupling ``c = (y1 / conj(y1)) t1* / s`` with ``y1`` the
    principal square root of ``y``.  Nothing is rejected on the basis of
    ``t``; ``checks`` records which postconditions hold.
    """
    lam, y, z, t = p.lam, p.y, p.z, p.t
    if lam <= tol or abs(y) <= tol or abs(z) <= tol:
        raise DegenerateParameter("decomposition needs lambda, y and z all nonzero")
    s = np.sqrt(lam)
    if abs(abs(y) + abs(z) - s) > tol:
        raise ConstraintViolated(f"|y|+|z| must equal sqrt(lambda): |y|+|z| = {abs(y) + abs(z):.12g}, sqrt(lambda) = {s:.12g}")
    ay, az = abs(y), abs(z)
    p1 = PartParams(ay * s, ay / s, t / 2, az * (1 - lam) / s)
    p2 = PartParams(az * s, az / s, t / 2, ay * (1 - lam) / s)
    y1 = np.sqrt(complex(y))
    c = (y1 / np.conj(y1)) * np.conj(p1.t) / s

    yb, zb, cb = np.conj(y), np.conj(z), np.conj(c)
    H1 = np.array(
        [[0, 0, 0, y], [0, p1.lam, 0, p1.t], [0, 0, p1.a, c], [yb, np.conj(p1.t), cb, p1.b]],
        dtype=complex,
    )
    H2 = np.array(
        [[0, 0, 0, 0], [0, p2.lam, zb, p2.t], [0, z, p2.a, -c], [0, np.conj(p2.t), -cb, p2.b]],
        dtype=complex,
    )
    Hb = face_choi_product_basis(lam, y, z, t)
    T = _from_product_basis(Hb, p.xi_basis, p.eta_basis)
    T1 = _from_product_basis(H1, p.xi_basis, p.eta_basis)
    T2 = _from_product_basis(H2, p.xi_basis, p.eta_basis)

    cocp = is_psd(partial_transpose(T1.choi, 2, 2, "first"), psd_tol)
    cp = is_psd(T2.choi, psd_tol)
    exact = 1e-12
    checks = {
        "sum": bool(np.max(np.abs(T1.choi + T2.choi - T.choi)) <= exact),
        "lambda_sum": bool(abs(p1.lam + p2.lam - lam) <= exact),
        "a_sum": bool(abs(p1.a + p2.a - 1) <= exact),
        "t_sum": bool(abs(p1.t + p2.t - t) <= exact),
        "b_sum": bool(abs(p1.b + p2.b - (1 - lam)) <= exact),
        "cp_part_psd": cp.psd,
        "cocp_part_pt_psd": cocp.psd,
    }
    return ExtremalDecomposition(T, T1, T2, complex(c), p1, p2, checks, cocp.min_eig, cp.min_eig)


# --- trace conditions and the local decomposition -----------------------------------


def _face_preconditions(T: MapRep, xi_basis, eta_basis, tol: float):
    if T.dim_in != 2:
        raise DimensionMismatch("expected a map on M_2")
    Ux = _check_unitary(np.eye(2) if xi_basis is None else xi_basis, 2, "xi_basis")
    Ue = _check_unitary(np.eye(T.dim_out) if eta_basis is None else eta_basis, T.dim_out, "eta_basis")
    if not is_unital(T, max(tol, 1e-10)):
        raise NotUnital("map is not unital")
    if not in_maximal_face_P(T, FaceSpecP(Ux[:, 0], Ue[:, 0]), max(tol, 1e-9)):
        raise NotInFace("T(p_xi1) eta1 != 0: map is not in F_max(p_xi1, eta1)")
    return Ux, Ue


@dataclass(frozen=True)
class TraceConditions:
    tr_e12: complex
    tr_e21: complex
    tr_e22: float
    tr_e11: float
    overlap_e12: complex
    overlap_e21: complex
    tol: float

    @property
    def off_diagonal_traces(self) -> bool:
        return abs(self.tr_e12) <= self.tol and abs(self.tr_e21) <= self.tol

    @property
    def unit_trace(self) -> bool:
        return abs(self.tr_e22 - 1) <= self.tol

    @property
    def weight_identity(self) -> bool:
        rhs = 2 * (abs(self.overlap_e12) ** 2 + abs(self.overlap_e21) ** 2)
        return abs(self.tr_e11 - rhs) <= self.tol

    def __bool__(self) -> bool:
        return self.off_diagonal_traces and self.unit_trace and self.weight_identity


def check_prop61_conditions(T: MapRep, xi_basis=None, eta_basis=None, tol: float = 1e-9) -> TraceConditions:
    """Trace conditions under which the local decomposition of ``T`` is global.

    ``Tr T(e12) = Tr T(e21) = 0``, ``Tr T(e22) = 1`` and
    ``Tr T(e11) = 2 (|<eta2, T(e12) eta1>|^2 + |<eta2, T(e21) eta1>|^2)``
    with ``e_ij = |xi_i><xi_j|``.
    """
    Ux, Ue = _face_preconditions(T, xi_basis, eta_basis, tol)
    e = lambda i, j: np.outer(Ux[:, i], Ux[:, j].conj())
    img = {(i, j): apply_map(T, e(i, j)) for i in range(2) for j in range(2)}
    eta1, eta2 = Ue[:, 0], Ue[:, 1]
    return TraceConditions(
        complex(np.trace(img[0, 1])),
        complex(np.trace(img[1, 0])),
        float(np.trace(img[1, 1]).real),
        float(np.trace(img[0, 0]).real),
        complex(np.vdot(eta2, img[0, 1] @ eta1)),
        complex(np.vdot(eta2, img[1, 0] @ eta1)),
        tol,
    )


_MATRIX_UNITS = [np.eye(2, dtype=complex)[:, [i]] @ np.eye(2, dtype=complex)[[j], :] for i in range(2) for j in range(2)]


def _gram_orthonormalize(G: np.ndarray, rel: float = 1e-10) -> np.ndarray:
    """Modified Gram-Schmidt of the matrix units against the Gram matrix ``G``.

    Returns coefficient rows ``C`` with ``C.conj() @ G @ C.T = 1``; directions
    of squared norm below ``rel * max eig(G)`` are dropped.
    """
    top = float(np.max(np.linalg.eigvalsh(0.5 * (G + G.conj().T))))
    kept = []
    for m in range(G.shape[0]):
        v = np.zeros(G.shape[0], dtype=complex)
        v[m] = 1.0
        for u in kept:
            v = v - (u.conj() @ G @ v) * u
        nrm2 = float((v.conj() @ G @ v).real)
        if nrm2 > rel * top:
            kept.append(v / np.sqrt(nrm2))
    return np.array(kept)


@dataclass(frozen=True, eq=False)
class LocalDecomposition:
    """``W`` and the representation ``pi = pi_left (+) pi_right`` on ``K = K_l (+) K_r``.

    ``K_l`` is the quotient of ``M_2`` by the left kernel of
    ``phi(a) = <eta1, T(a) eta1>``, with inner product ``phi(a^* b) / 2``;
    ``K_r`` the quotient by the right kernel with ``phi(b a^*) / 2``.  The
    halves make ``W^* eta1`` the class of the identity, so that
    ``W pi(a) W^* eta1 = T(a) eta1``.
    """

    T: MapRep
    W: np.ndarray
    left_coords: np.ndarray
    right_coords: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    eta1: np.ndarray
    cyclic_dim: int
    jordan_defect: float

    def pi_left(self, a) -> np.ndarray:
        a = as_matrix(a)
        cols = [self.left_coords @ (a @ _unflat(u)).reshape(-1) for u in self.left_basis]
        return np.array(cols).T

    def pi_right(self, a) -> np.ndarray:
        a = as_matrix(a)
        cols = [self.right_coords @ (_unflat(u) @ a).reshape(-1) for u in self.right_basis]
        return np.array(cols).T

    def pi(self, a) -> np.ndarray:
        L, R = self.pi_left(a), self.pi_right(a)
        out = np.zeros((L.shape[0] + R.shape[0],) * 2, dtype=complex)
        out[: L.shape[0], : L.shape[0]] = L
        out[L.shape[0]:, L.shape[0]:] = R
        return out

    def cls(self, b) -> np.ndarray:
        """Coordinates of ``[b]_l (+) [b]_r`` in ``K``."""
        flat = as_matrix(b).reshape(-1)
        return np.concatenate([self.left_coords @ flat, self.right_coords @ flat])

    def reconstruct(self, a) -> np.ndarray:
        return self.W @ self.pi(a) @ self.W.conj().T

    def defining_residual(self) -> float:
        """``max_a ||W pi(a) W^* eta1 - T(a) eta1||`` over matrix units."""
        return max(
            float(np.linalg.norm(self.reconstruct(a) @ self.eta1 - apply_map(self.T, a) @ self.eta1))
            for a in _MATRIX_UNITS
        )

    def full_residual(self) -> float:
        """``max_a ||W pi(a) W^* - T(a)||`` over matrix units."""
        return max(float(np.linalg.norm(self.reconstruct(a) - apply_map(self.T, a), 2)) for a in _MATRIX_UNITS)


def _unflat(v: np.ndarray) -> np.ndarray:
    return v.reshape(2, 2)


def build_local_decomposition(T: MapRep, xi_basis=None, eta_basis=None, tol: float = 1e-9) -> LocalDecomposition:
    """GNS construction of ``(W, pi)`` at the vector ``eta1`` for a unital face map."""
    Ux, Ue = _face_preconditions(T, xi_basis, eta_basis, tol)
    eta1 = Ue[:, 0]
    phi = lambda a: complex(np.vdot(eta1, apply_map(T, a) @ eta1))
    units = _MATRIX_UNITS
    Gl = np.array([[0.5 * phi(a.conj().T @ b) for b in units] for a in units])
    Gr = np.array([[0.5 * phi(b @ a.conj().T) for b in units] for a in units])
    Cl, Cr = _gram_orthonormalize(Gl), _gram_orthonormalize(Gr)
    if len(Cl) != 2 or len(Cr) != 2:
        raise DegenerateGNS(f"GNS quotients have dimensions ({len(Cl)}, {len(Cr)}), expected (2, 2)")
    # coordinates of [b] are <u_r, b>; orthonormal elements u_r = sum_m C[r, m] e_m
    Lc, Rc = Cl.conj() @ Gl, Cr.conj() @ Gr
    X = np.array([np.concatenate([Lc @ u.reshape(-1), Rc @ u.reshape(-1)]) for u in units]).T
    Y = np.array([apply_map(T, u) @ eta1 for u in units]).T
    # W = Y X^+, so W vanishes off the cyclic subspace
    W = Y @ X.conj().T @ pseudo_inverse(X @ X.conj().T, 1e-12)
    if np.linalg.norm(W @ X - Y) > max(tol, 1e-9) * max(1.0, np.linalg.norm(Y)):
        raise NotInFace("T(a) eta1 does not factor through the GNS classes")
    cyclic = int(np.sum(np.linalg.svd(X, compute_uv=False) > 1e-10 * np.linalg.norm(X)))
    dec = LocalDecomposition(
        T, W, Lc, Rc, Cl @ np.array([u.reshape(-1) for u in units]), Cr @ np.array([u.reshape(-1) for u in units]),
        eta1, cyclic, 0.0,
    )
    object.__setattr__(dec, "jordan_defect", _jordan_defect(dec))
    return dec


def _jordan_defect(dec: LocalDecomposition) -> float:
    """Largest failure of multiplicativity (left), anti-multiplicativity (right), unitality, *-preservation."""
    worst = 0.0
    I = np.eye(2)
    worst = max(worst, np.abs(dec.pi_left(I) - np.eye(2)).max(), np.abs(dec.pi_right(I) - np.eye(2)).max())
    for a in _MATRIX_UNITS:
        worst = max(worst, np.abs(dec.pi(a.conj().T) - dec.pi(a).conj().T).max())
        for b in _MATRIX_UNITS:
            worst = max(worst, np.abs(dec.pi_left(a @ b) - dec.pi_left(a) @ dec.pi_left(b)).max())
            worst = max(worst, np.abs(dec.pi_right(a @ b) - dec.pi_right(b) @ dec.pi_right(a)).max())
    return float(worst)


# --- maps M_2 -> M_3 --------------------------------------------------------------------


def verify_2x3_block_structure(T: MapRep, xi_basis=None, eta_basis=None, tol: float = 1e-9) -> bool:
    """Check the Choi pattern of a unital map ``M_2 -> M_3`` in ``F_max(p_xi1, eta1)``.

    In the product basis ``[[A11, A12], [A12^*, A22]]`` must have: first row and
    column of ``A11`` zero, ``A22 = 1 - A11`` (hence ``A22[0, 0] = 1``),
    ``A12[0, 0] = 0`` and ``A11 >= 0``.
    """
    if (T.dim_in, T.dim_out) != (2, 3):
        raise PatternMismatch(f"expected a map M_2 -> M_3, got {T.dim_in} -> {T.dim_out}")
    H = choi_in_bases(T, xi_basis, eta_basis)
    A11, A12, A22 = H[:3, :3], H[:3, 3:], H[3:, 3:]
    return bool(
        np.max(np.abs(A11[0, :])) <= tol
        and np.max(np.abs(A11[:, 0])) <= tol
        and np.max(np.abs(A22 - (np.eye(3) - A11))) <= tol
        and abs(A12[0, 0]) <= tol
        and is_psd(A11, tol).psd
    )


def _blocks(M, d: int = 3):
    M = M.choi if isinstance(M, MapRep) else as_matrix(M)
    if M.shape != (2 * d, 2 * d):
        raise PatternMismatch(f"expected a {2 * d}x{2 * d} block matrix, got {M.shape}")
    return M, M[:d, :d], M[:d, d:], M[d:, d:]


def _cauchy_schwarz_sampled(A11, A12, A22, samples: int, seed: int, tol: float) -> bool:
    rng = np.random.default_rng(seed)
    R11, R22 = sqrt_psd(A11), sqrt_psd(A22)
    scale = max(1.0, np.linalg.norm(A12, 2))
    for _ in range(samples):
        x = rng.normal(size=3) + 1j * rng.normal(size=3)
        y = rng.normal(size=3) + 1j * rng.normal(size=3)
        x, y = x / np.linalg.norm(x), y / np.linalg.norm(y)
        if abs(np.vdot(x, A12 @ y)) > np.linalg.norm(R11 @ x) * np.linalg.norm(R22 @ y) + np.sqrt(tol) * scale:
            return False
    return True


def verify_2x3_split(T, AI, AII, tol: float = 1e-9, samples: int = 500, seed: int = 0) -> bool:
    """Verify a splitting of a ``M_2 -> M_3`` Choi matrix into a CP and a co-CP block matrix.

    Returns True or raises ``SplitInvalid`` naming the first failed condition:
    ``sum``, ``diagonal_psd_I``, ``diagonal_psd_II``, ``cauchy_schwarz_I``,
    ``cauchy_schwarz_II``.  The Cauchy-Schwarz bounds are sampled on
    ``samples`` seeded vector pairs and then settled exactly by a PSD test
    (of candidate I, and of the partial transpose of candidate II).
    """
    H, A11, A12, A22 = _blocks(T)
    MI, I11, I12, I22 = _blocks(AI)
    MII, J11, J12, J22 = _blocks(AII)
    scale = max(1.0, np.linalg.norm(H, 2))
    if np.max(np.abs(MI + MII - H)) > tol * scale:
        raise SplitInvalid("sum", "blocks of the two candidates do not add up to H")
    if not (is_psd(I11, tol) and is_psd(I22, tol)):
        raise SplitInvalid("diagonal_psd_I")
    if not (is_psd(J11, tol) and is_psd(J22, tol)):
        raise SplitInvalid("diagonal_psd_II")
    if not _cauchy_schwarz_sampled(I11, I12, I22, samples, seed, tol) or not is_psd(MI, tol):
        raise SplitInvalid("cauchy_schwarz_I")
    if not _cauchy_schwarz_sampled(J11, J12.conj().T, J22, samples, seed + 1, tol) or not is_psd(
        partial_transpose(MII, 2, 3, "first"), tol
    ):
        raise SplitInvalid("cauchy_schwarz_II")
    return True


# --- Jordan morphisms and the Schrödinger picture ------------------------------------


def _check_isometry(W, n: int) -> np.ndarray:
    W = as_matrix(W)
    if W.shape != (2 * n, n):
        raise DimensionMismatch(f"W must be {2 * n}x{n}, got {W.shape}")
    if np.max(np.abs(W.conj().T @ W - np.eye(n))) > 1e-10:
        raise ValueError("W must be an isometry")
    return W


def jordan_map(W, u, v) -> MapRep:
    """``a -> W^* (u^* a u (+) v^* a^T v) W`` on ``M_n``."""
    u, v = as_matrix(u), as_matrix(v)
    n = u.shape[0]
    W = _check_isometry(W, n)

    def f(a):
        tau = np.zeros((2 * n, 2 * n), dtype=complex)
        tau[:n, :n] = u.conj().T @ a @ u
        tau[n:, n:] = v.conj().T @ a.T @ v
        return W.conj().T @ tau @ W

    return map_from_function(f, n, n)


class JordanSplit(NamedTuple):
    weight_morphism: float
    weight_antimorphism: float
    state_morphism: np.ndarray
    state_antimorphism: np.ndarray
    image: np.ndarray


def schrodinger_split(W, u, v, f) -> JordanSplit:
    """Dual image of the pure state ``|f><f|`` under :func:`jordan_map`.

    With ``xi = W f`` and ``z`` the projection onto the first block, the image
    is ``lam * sigma1 + lam' * sigma2`` where ``lam = ||z xi||^2``,
    ``lam' = ||(1 - z) xi||^2``, ``sigma1 = u p u^*`` and ``sigma2 = (v p' v^*)^T``
    for the normalized block projections ``p, p'``.  ``image`` is computed
    separately through :func:`dual_map`.
    """
    u, v = as_matrix(u), as_matrix(v)
    n = u.shape[0]
    W = _check_isometry(W, n)
    f = as_vector(f)
    f = f / np.linalg.norm(f)
    xi = W @ f
    top, bottom = xi[:n], xi[n:]
    lam, lam_p = float(np.vdot(top, top).real), float(np.vdot(bottom, bottom).real)
    s1 = u @ np.outer(top, top.conj()) @ u.conj().T / lam if lam > 0 else np.zeros((n, n), dtype=complex)
    s2 = (v @ np.outer(bottom, bottom.conj()) @ v.conj().T).T / lam_p if lam_p > 0 else np.zeros((n, n), dtype=complex)
    image = apply_map(dual_map(jordan_map(W, u, v)), np.outer(f, f.conj()))
    return JordanSplit(lam, lam_p, s1, s2, image)
