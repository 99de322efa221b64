"""JSON interchange for matrices, maps and states.

Matrix document::

    {"rows": n, "cols": m, "entries": [[re, im], ...], "dims": [d1, d2]}

with entries row-major and ``dims`` optional (bipartite operators).  Map
document::

    {"dim_in": n, "dim_out": m, "kind": "choi" | "images" | "kraus", "data": ...}

where ``data`` is one matrix document (``choi``), the ``n*n`` images of the
matrix units ``e_ij`` in row-major order (``images``), or a list of Kraus
operators (``kraus``).  Floats are written with ``repr`` precision, so a
document re-parses to bit-identical values.
"""

from __future__ import annotations

import json
import math
import sys
from typing import Any, Optional

import numpy as np

from .choi import MapRep, MapSpec, choi_of_map, map_from_kraus
from .errors import MalformedSpec, NotHermitian


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, allow_nan=False, indent=2) + "\n"


def read_document(path: str) -> Any:
    """Parse a JSON file (``-`` for stdin); syntax errors report line and column."""
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise MalformedSpec(f"{path}: cannot read file: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedSpec(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def matrix_to_json(M, dims: Optional[tuple] = None) -> dict:
    M = np.asarray(M, dtype=complex)
    doc = {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in M.reshape(-1)],
    }
    if dims is not None:
        doc["dims"] = [int(d) for d in dims]
    return doc


def _int_field(doc: dict, key: str, path: str) -> int:
    if key not in doc:
        raise MalformedSpec(f"{path}.{key}: missing field")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise MalformedSpec(f"{path}.{key}: expected a positive integer, got {v!r}")
    return v


def _finite(v, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise MalformedSpec(f"{path}: expected a number, got {v!r}")
    if not math.isfinite(v):
        raise MalformedSpec(f"{path}: non-finite number")
    return float(v)


def matrix_from_json(doc: Any, path: str = "$") -> tuple[np.ndarray, Optional[tuple]]:
    if not isinstance(doc, dict):
        raise MalformedSpec(f"{path}: expected an object")
    rows, cols = _int_field(doc, "rows", path), _int_field(doc, "cols", path)
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise MalformedSpec(f"{path}.entries: expected a list of [re, im] pairs")
    if len(entries) != rows * cols:
        raise MalformedSpec(f"{path}.entries: expected {rows * cols} entries, got {len(entries)}")
    vals = np.empty(rows * cols, dtype=complex)
    for k, e in enumerate(entries):
        p = f"{path}.entries[{k}]"
        if not isinstance(e, list) or len(e) != 2:
            raise MalformedSpec(f"{p}: expected [re, im]")
        vals[k] = complex(_finite(e[0], p + "[0]"), _finite(e[1], p + "[1]"))
    dims = None
    if "dims" in doc:
        d = doc["dims"]
        if not (isinstance(d, list) and len(d) == 2 and all(isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in d)):
            raise MalformedSpec(f"{path}.dims: expected [d1, d2] with positive integers")
        if d[0] * d[1] != rows or rows != cols:
            raise MalformedSpec(f"{path}.dims: {d[0]}*{d[1]} does not match a {rows}x{cols} matrix")
        dims = (d[0], d[1])
    return vals.reshape(rows, cols), dims


MAP_KINDS = ("choi", "images", "kraus")


def map_to_json(T: MapRep) -> dict:
    return {"dim_in": T.dim_in, "dim_out": T.dim_out, "kind": "choi", "data": matrix_to_json(T.choi)}


def map_from_json(doc: Any, path: str = "$") -> MapRep:
    if not isinstance(doc, dict):
        raise MalformedSpec(f"{path}: expected an object")
    din, dout = _int_field(doc, "dim_in", path), _int_field(doc, "dim_out", path)
    kind = doc.get("kind")
    if kind not in MAP_KINDS:
        raise MalformedSpec(f"{path}.kind: expected one of {', '.join(MAP_KINDS)}, got {kind!r}")
    data = doc.get("data")
    dp = f"{path}.data"
    if kind == "choi":
        M, _ = matrix_from_json(data, dp)
        n = din * dout
        if M.shape != (n, n):
            raise MalformedSpec(f"{dp}: Choi matrix must be {n}x{n}, got {M.shape[0]}x{M.shape[1]}")
        try:
            return MapRep(din, dout, M)
        except NotHermitian as exc:
            raise MalformedSpec(f"{dp}: {exc}") from None
    if not isinstance(data, list):
        raise MalformedSpec(f"{dp}: expected a list of matrices")
    mats = [matrix_from_json(m, f"{dp}[{k}]")[0] for k, m in enumerate(data)]
    if kind == "images":
        if len(mats) != din * din:
            raise MalformedSpec(f"{dp}: expected {din * din} images, got {len(mats)}")
        for k, m in enumerate(mats):
            if m.shape != (dout, dout):
                raise MalformedSpec(f"{dp}[{k}]: image must be {dout}x{dout}")
        return choi_of_map(MapSpec(din, dout, mats))
    if not mats:
        raise MalformedSpec(f"{dp}: empty Kraus list")
    for k, m in enumerate(mats):
        if m.shape != (dout, din):
            raise MalformedSpec(f"{dp}[{k}]: Kraus operator must be {dout}x{din}")
    return map_from_kraus(mats)


def state_from_json(doc: Any, path: str = "$"):
    from .entanglement import DensityMatrix

    M, dims = matrix_from_json(doc, path)
    if dims is None:
        raise MalformedSpec(f"{path}.dims: states need factor dimensions [d1, d2]")
    return DensityMatrix(dims[0], dims[1], M)


def load_map(path: str) -> MapRep:
    return map_from_json(read_document(path))


def load_state(path: str):
    return state_from_json(read_document(path))


def load_matrix(path: str) -> np.ndarray:
    return matrix_from_json(read_document(path))[0]
