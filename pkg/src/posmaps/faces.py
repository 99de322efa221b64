"""Maximal faces of the cones of positive and of completely positive maps.

``F_max(p_xi, eta) = {T positive : T(p_xi) eta = 0}`` is a maximal face of the
positive cone; ``F_max(V)`` collects the CP maps all of whose Kraus operators
are orthogonal to ``V`` in the trace inner product.  With the Kraus convention
``a -> sum W a W^*`` used here, the CP face paired with ``F_max(p_xi, eta)``
is ``F_max(|eta><xi|)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.stats import norm, qmc

from .choi import MapRep, apply_map, kraus_from_choi
from .errors import DimensionMismatch
from .linalg import as_matrix, as_vector, lowest_eigpair, projector
from .positivity import SeesawConfig, min_product_expectation

FACE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FaceSpecP:
    xi: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        xi, eta = as_vector(self.xi), as_vector(self.eta)
        if abs(np.linalg.norm(xi) - 1.0) > 1e-12:
            raise ValueError("xi must be a unit vector")
        if np.linalg.norm(eta) == 0.0:
            raise ValueError("eta must be nonzero")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def normalized(cls, xi, eta) -> FaceSpecP:
        xi = as_vector(xi)
        return cls(xi / np.linalg.norm(xi), eta)


@dataclass(frozen=True, eq=False)
class FaceSpecCP:
    V: np.ndarray

    def __post_init__(self):
        V = as_matrix(self.V)
        if np.linalg.norm(V) == 0.0:
            raise ValueError("V must be nonzero")
        object.__setattr__(self, "V", V)


def face_residual_P(T: MapRep, f: FaceSpecP) -> float:
    """Scale-free residual ``||T(p_xi) eta|| / (||C_T|| ||eta||)``.

    Normalizing by the Choi norm rather than ``||T(p_xi)||`` keeps the
    residual meaningful when ``T(p_xi)`` itself vanishes.
    """
    if f.xi.size != T.dim_in or f.eta.size != T.dim_out:
        raise DimensionMismatch("face vectors do not match the map dimensions")
    img = apply_map(T, projector(f.xi))
    denom = np.linalg.norm(T.choi, 2) * np.linalg.norm(f.eta)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(img @ f.eta) / denom)


def in_maximal_face_P(T: MapRep, f: FaceSpecP, tol: float = FACE_TOL) -> bool:
    return face_residual_P(T, f) <= tol


def in_maximal_face_CP(T: MapRep, f: FaceSpecCP, tol: float = FACE_TOL) -> bool:
    """All Kraus operators orthogonal to ``V``; raises ``NotCompletelyPositive`` if T is not CP."""
    if f.V.shape != (T.dim_out, T.dim_in):
        raise DimensionMismatch(f"V must be {T.dim_out}x{T.dim_in}, got {f.V.shape}")
    vnorm = np.linalg.norm(f.V)
    for W in kraus_from_choi(T):
        if abs(np.trace(W.conj().T @ f.V)) > tol * np.linalg.norm(W) * vnorm:
            return False
    return True


class FaceInclusion(NamedTuple):
    cp_face: bool
    p_face: bool

    @property
    def implication_holds(self) -> bool:
        return (not self.cp_face) or self.p_face


def check_face_inclusion(T: MapRep, xi, eta, tol: float = FACE_TOL) -> FaceInclusion:
    """Evaluate both memberships for ``F_max(|eta><xi|)`` and ``F_max(p_xi, eta)``."""
    f = FaceSpecP.normalized(xi, eta)
    eta = f.eta / np.linalg.norm(f.eta)
    cp = in_maximal_face_CP(T, FaceSpecCP(np.outer(eta, f.xi.conj())), tol)
    return FaceInclusion(cp, in_maximal_face_P(T, f, tol))


@dataclass(frozen=True)
class InteriorCheck:
    interior: bool
    min_eig: float
    xi: np.ndarray

    def __bool__(self) -> bool:
        return self.interior


def sphere_points(d: int, n: int, seed: int) -> np.ndarray:
    """``n`` quasi-random unit vectors in ``C^d`` (scrambled Halton, Gaussian-mapped)."""
    u = qmc.Halton(d=2 * d, seed=seed).random(n)
    g = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    z = g[:, :d] + 1j * g[:, d:]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def is_interior_P(T: MapRep, samples: int = 256, cfg: SeesawConfig = SeesawConfig()) -> InteriorCheck:
    """Decide whether ``T(p_xi)`` is nonsingular for every unit ``xi``.

    ``min_xi lambda_min(T(p_xi))`` equals the smallest product expectation of
    the Choi matrix (with ``xi`` the conjugate of the first factor), so the
    see-saw does the descent; ``samples`` quasi-random points are added on top.
    Singular means ``lambda_min <= cfg.tol * ||T(p_xi)||``.
    """
    if T.dim_in != T.dim_out:
        raise DimensionMismatch("interior test is defined for square maps")
    res = min_product_expectation(T.choi, T.dim_in, T.dim_out, cfg)
    candidates = [res.x.conj()]
    if samples > 0:
        candidates.extend(sphere_points(T.dim_in, samples, cfg.seed))
    best = None
    for xi in candidates:
        img = apply_map(T, projector(xi))
        lam = lowest_eigpair(img)[0]
        ratio = lam / max(np.linalg.norm(img, 2), 1e-300)
        if best is None or ratio < best[0]:
            best = (ratio, lam, xi)
    ratio, lam, xi = best
    return InteriorCheck(bool(ratio > cfg.tol), float(lam), xi)
