"""Positive linear maps between matrix algebras.

Maps are stored by their Choi matrix (:class:`MapRep`).  The package covers
the Choi correspondence, CP / co-CP / positivity classification, maximal
faces of the positive cone, the structure of positive maps on ``M_2``, and
entanglement detection with positive maps.
"""

__version__ = "0.1.0"

from .choi import (
    KrausSet,
    MapRep,
    MapSpec,
    apply_map,
    choi_of_map,
    depolarizing_map,
    dual_map,
    identity_map,
    kraus_from_choi,
    map_from_function,
    map_from_kraus,
    transpose_map,
)
from .entanglement import DensityMatrix, choi_map_3, ppt_test, separability_screen, witness_apply
from .errors import DomainError, InputError, PosmapError
from .faces import FaceSpecCP, FaceSpecP, in_maximal_face_CP, in_maximal_face_P, is_interior_P
from .positivity import SeesawConfig, Verdict, classify, is_block_positive
from .stormer import FaceMapParams, StormerParams, decompose_extremal, face_map_2d, stormer_extremal
