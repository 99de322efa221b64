"""Regenerate the CLI fixture inputs and golden reports.

    python tests/golden/generate.py

Run only after an intentional change of the report format or numerics, and
review the diff.
"""

import io
import os
import sys
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

from cli_corpus import CORPUS, INPUTS  # noqa: E402
from posmaps.choi import identity_map, map_from_function, transpose_map  # noqa: E402
from posmaps.cli import main  # noqa: E402
from posmaps.entanglement import choi_map_3  # noqa: E402
from posmaps.jsonio import dumps, map_to_json, matrix_to_json  # noqa: E402


def write_inputs():
    INPUTS.mkdir(exist_ok=True)
    (INPUTS / "transpose_map.json").write_text(dumps(map_to_json(transpose_map(2))))
    (INPUTS / "choi3_map.json").write_text(dumps(map_to_json(choi_map_3())))
    (INPUTS / "negative_map.json").write_text(dumps(map_to_json(map_from_function(lambda a: -a, 2, 2))))
    units = [np.outer(np.eye(2)[i], np.eye(2)[j]) for i in range(2) for j in range(2)]
    (INPUTS / "identity_images.json").write_text(
        dumps({"dim_in": 2, "dim_out": 2, "kind": "images", "data": [matrix_to_json(u) for u in units]})
    )
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    (INPUTS / "bell_state.json").write_text(dumps(matrix_to_json(np.outer(phi, phi), (2, 2))))
    prod = np.kron(np.diag([0.3, 0.7, 0.0]), np.diag([0.2, 0.3, 0.5]))
    (INPUTS / "product_state.json").write_text(dumps(matrix_to_json(prod, (3, 3))))
    (INPUTS / "malformed.json").write_text('{"dim_in": 2, "dim_out": 2,\n "kind": "choi" "data": {}}\n')
    bad = {"dim_in": 2, "dim_out": 2, "kind": "choi", "data": {"rows": 4, "cols": 4, "entries": [[0.0, 0.0]] * 15}}
    (INPUTS / "short_entries.json").write_text(dumps(bad))


def write_goldens():
    os.chdir(HERE)
    for name, argv, _code in CORPUS:
        out = io.StringIO()
        main(argv, stdout=out, stderr=io.StringIO())
        (HERE / f"{name}.json").write_text(out.getvalue())


if __name__ == "__main__":
    write_inputs()
    write_goldens()
    print(f"wrote {len(CORPUS)} golden reports")
