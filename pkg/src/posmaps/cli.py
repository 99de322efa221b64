"""``posmap`` command-line interface.

Exit codes: 0 success, 1 input error, 2 domain verdict or domain error
(non-positive map, decomposition constraint, map not screened), 3 internal
error.  An entangled verdict is a successful result and exits 0.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .choi import MapRep, depolarizing_map, identity_map, is_unital, transpose_map
from .entanglement import (
    DensityMatrix,
    bell_state,
    choi_map_3,
    isotropic_state,
    maximally_mixed,
    ppt_test,
    separability_screen,
    witness_apply,
)
from .errors import DomainError, InputError, NotCompletelyPositive
from .faces import FaceSpecCP, FaceSpecP, face_residual_P, in_maximal_face_CP
from .jsonio import dumps, load_map, load_matrix, load_state, matrix_to_json
from .positivity import SeesawConfig, Verdict, classify
from .stormer import FaceMapParams, decompose_extremal, face_map_2d

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _num(x: float) -> str:
    return f"{x:.10g}"


def _cnum(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return _num(z.real)
    return f"{_num(z.real)}{z.imag:+.10g}j"


def _cjson(z: complex) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _vjson(v) -> list:
    return [_cjson(z) for z in np.asarray(v).reshape(-1)]


def _matrix_text(M) -> list[str]:
    M = np.asarray(M)
    cells = [[_cnum(z) for z in row] for row in M]
    w = max(len(c) for row in cells for c in row)
    return ["  [" + "  ".join(c.rjust(w) for c in row) + "]" for row in cells]


def _complex_arg(s: str) -> complex:
    try:
        return complex(s.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {s!r}") from None


def _named_map(spec: str) -> MapRep:
    name, _, arg = spec.partition(":")
    d = 2
    if arg:
        if not arg.isdigit() or int(arg) < 1:
            raise InputError(f"--map {spec}: dimension must be a positive integer")
        d = int(arg)
    makers = {"identity": identity_map, "transpose": transpose_map, "depolarizing": depolarizing_map}
    if name == "choi3":
        if arg and d != 3:
            raise InputError("--map choi3 is defined on M_3 only")
        return choi_map_3()
    if name not in makers:
        raise InputError(f"--map: unknown map {name!r} (choose identity, transpose, depolarizing, choi3)")
    return makers[name](d)


def _get_map(args) -> tuple[str, MapRep]:
    if args.map is not None and args.mapfile is not None:
        raise InputError("give either a map file or --map, not both")
    if args.map is not None:
        return args.map, _named_map(args.map)
    if args.mapfile is None:
        raise InputError("a map file (or --map NAME) is required")
    return args.mapfile, load_map(args.mapfile)


def _float_arg(s: str, what: str) -> float:
    try:
        return float(s)
    except ValueError:
        raise InputError(f"{what}: not a number: {s!r}") from None


def _named_state(spec: str) -> DensityMatrix:
    parts = spec.split(":")
    name, rest = parts[0], parts[1:]
    if name == "bell" and not rest:
        return bell_state()
    if name == "werner" and len(rest) == 1:
        return isotropic_state(2, _float_arg(rest[0], "--state werner:P"))
    if name == "isotropic" and len(rest) == 2 and rest[0].isdigit():
        return isotropic_state(int(rest[0]), _float_arg(rest[1], "--state isotropic:D:P"))
    if name == "mixed" and len(rest) == 2 and all(r.isdigit() for r in rest):
        return maximally_mixed(int(rest[0]), int(rest[1]))
    raise InputError(f"--state: unknown state {spec!r} (choose bell, werner:P, isotropic:D:P, mixed:D1:D2)")


def _get_state(args) -> tuple[str, DensityMatrix]:
    if args.state is not None and args.statefile is not None:
        raise InputError("give either a state file or --state, not both")
    if args.state is not None:
        return args.state, _named_state(args.state)
    if args.statefile is None:
        raise InputError("a state file (or --state NAME) is required")
    return args.statefile, load_state(args.statefile)


def _vector_arg(s: str, d: int, flag: str) -> np.ndarray:
    m = re.fullmatch(r"e(\d+)", s)
    if m:
        k = int(m.group(1))
        if not 1 <= k <= d:
            raise InputError(f"{flag} {s}: index out of range for dimension {d}")
        v = np.zeros(d, dtype=complex)
        v[k - 1] = 1.0
        return v
    try:
        v = np.array([complex(p.strip()) for p in s.split(",")])
    except ValueError:
        raise InputError(f"{flag}: expected eK or comma-separated complex numbers, got {s!r}") from None
    if v.size != d:
        raise InputError(f"{flag}: expected {d} components, got {v.size}")
    if np.linalg.norm(v) == 0:
        raise InputError(f"{flag}: vector must be nonzero")
    return v


def _cfg(args) -> SeesawConfig:
    return SeesawConfig(starts=args.starts, seed=args.seed, tol=args.tol)


# --- commands --------------------------------------------------------------------------


def cmd_classify(args):
    name, T = _get_map(args)
    c = classify(T, _cfg(args))
    report = {
        "command": "classify",
        "map": name,
        "dim_in": T.dim_in,
        "dim_out": T.dim_out,
        "verdict": c.verdict.value,
        "cp_min_eig": c.cp_min_eig,
        "cocp_min_eig": c.cocp_min_eig,
        "block_min": c.block_min,
        "decomposable": c.decomposable,
        "seed": args.seed,
        "starts": args.starts,
        "certificate": None if c.witness_vectors is None else {"x": _vjson(c.witness_vectors[0]), "y": _vjson(c.witness_vectors[1])},
    }
    lines = [
        f"map: {name} ({T.dim_in} -> {T.dim_out})",
        f"verdict: {c.verdict.value}",
        f"cp_min_eig: {_num(c.cp_min_eig)}",
        f"cocp_min_eig: {_num(c.cocp_min_eig)}",
        f"block_min: {_num(c.block_min)}",
    ]
    if c.decomposable:
        lines.append("decomposable: yes (every positive map in these dimensions is)")
    if c.witness_vectors is not None:
        lines.append("certificate x: " + ", ".join(_cnum(z) for z in c.witness_vectors[0]))
        lines.append("certificate y: " + ", ".join(_cnum(z) for z in c.witness_vectors[1]))
    if c.verdict is Verdict.POSITIVE_UNDETERMINED:
        lines.append("note: no violation found by sampling; positivity is not proven")
    return report, lines, EXIT_DOMAIN if c.verdict is Verdict.NOT_POSITIVE else EXIT_OK


def _bases(args):
    xi = np.eye(2, dtype=complex) if args.xi_basis is None else load_matrix(args.xi_basis)
    eta = np.eye(2, dtype=complex) if args.eta_basis is None else load_matrix(args.eta_basis)
    return xi, eta


def _face_params(args) -> FaceMapParams:
    xi, eta = _bases(args)
    try:
        return FaceMapParams(args.lam, args.y, args.z, args.t, xi, eta)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_decompose2(args):
    d = decompose_extremal(_face_params(args))
    params = {}
    for k, p in (("1", d.params1), ("2", d.params2)):
        params[k] = {"lambda": p.lam, "a": p.a, "t": _cjson(p.t), "b": p.b}
    report = {
        "command": "decompose2",
        "H_T": matrix_to_json(d.H_T.choi),
        "H_T1": matrix_to_json(d.H_T1.choi),
        "H_T2": matrix_to_json(d.H_T2.choi),
        "c": _cjson(d.c),
        "params": params,
        "checks": dict(d.checks),
        "cp_min_eig": d.cp_min_eig,
        "cocp_min_eig": d.cocp_min_eig,
        "valid": d.valid,
    }
    lines = ["H_T:", *_matrix_text(d.H_T.choi), "H_T1 (co-CP part):", *_matrix_text(d.H_T1.choi)]
    lines += ["H_T2 (CP part):", *_matrix_text(d.H_T2.choi), f"c: {_cnum(d.c)}"]
    lines.append("part  lambda        a             t             b")
    for k, p in (("1", d.params1), ("2", d.params2)):
        lines.append(f"{k:<5} {_num(p.lam):<13} {_num(p.a):<13} {_cnum(p.t):<13} {_num(p.b)}")
    lines.append(f"cp_min_eig: {_num(d.cp_min_eig)}")
    lines.append(f"cocp_min_eig: {_num(d.cocp_min_eig)}")
    for k, ok in d.checks.items():
        lines.append(f"check {k}: {'pass' if ok else 'FAIL'}")
    return report, lines, EXIT_OK if d.valid else EXIT_DOMAIN


def cmd_face_map(args):
    p = _face_params(args)
    T = face_map_2d(p, check=not args.no_check, cfg=_cfg(args))
    residual = face_residual_P(T, FaceSpecP(p.xi, p.eta))
    report = {
        "command": "face-map",
        "choi": matrix_to_json(T.choi),
        "unital": is_unital(T),
        "face_residual": residual,
        "positivity_checked": not args.no_check,
    }
    lines = ["Choi matrix:", *_matrix_text(T.choi), f"unital: {'yes' if report['unital'] else 'no'}"]
    lines.append(f"face_residual: {_num(residual)}")
    lines.append("positivity: " + ("no violation found" if not args.no_check else "not checked"))
    return report, lines, EXIT_OK


def _witness_report(rep, name: str) -> dict:
    return {
        "map_used": rep.map_used,
        "min_eig": rep.min_eig,
        "entangled": rep.entangled,
        "eigvector": _vjson(rep.eigvector),
        "verdict": rep.verdict,
        "state": name,
    }


def cmd_ppt(args):
    name, rho = _get_state(args)
    rep = ppt_test(rho, args.tol)
    report = {"command": "ppt", "dims": [rho.d1, rho.d2], **_witness_report(rep, name)}
    tag = "NPT" if rep.entangled else "PPT"
    return report, [f"{tag}, min_eig = {_num(rep.min_eig)}, {rep.verdict.upper()}"], EXIT_OK


def cmd_witness(args):
    mname, T = _get_map(args)
    sname, rho = _get_state(args)
    rep = witness_apply(T, rho, args.side, args.tol, cfg=_cfg(args), name=mname)
    report = {"command": "witness", "side": args.side, **_witness_report(rep, sname)}
    return report, [f"{mname} on {sname} ({args.side} factor): min_eig = {_num(rep.min_eig)}, {rep.verdict.upper()}"], EXIT_OK


def cmd_screen(args):
    sname, rho = _get_state(args)
    names = args.maps or ["transpose:2", "transpose:3", "choi3"]
    maps = [(n, _named_map(n)) for n in names]
    maps += [(f, load_map(f)) for f in args.map_file or []]
    res = separability_screen(rho, maps, args.tol, _cfg(args))
    report = {
        "command": "screen",
        "state": sname,
        "verdict": res.verdict,
        "minima": res.minima,
        "skipped": list(res.skipped),
        "certificate": None if res.certificate is None else _witness_report(res.certificate, sname),
    }
    lines = [f"state: {sname}", f"verdict: {res.verdict}"]
    lines += [f"  {k}: min_eig = {_num(v)}" for k, v in res.minima.items()]
    if res.skipped:
        lines.append("skipped (dimension mismatch): " + ", ".join(res.skipped))
    return report, lines, EXIT_OK


def cmd_face(args):
    name, T = _get_map(args)
    xi = _vector_arg(args.xi, T.dim_in, "--xi")
    eta = _vector_arg(args.eta, T.dim_out, "--eta")
    f = FaceSpecP.normalized(xi, eta)
    residual = face_residual_P(T, f)
    member = residual <= args.tol
    try:
        e = eta / np.linalg.norm(eta)
        cp_member = in_maximal_face_CP(T, FaceSpecCP(np.outer(e, f.xi.conj())), args.tol)
    except NotCompletelyPositive:
        cp_member = None
    report = {
        "command": "face",
        "map": name,
        "xi": _vjson(f.xi),
        "eta": _vjson(eta),
        "face_residual": residual,
        "p_face": member,
        "cp_face": cp_member,
    }
    lines = [
        f"{name}: {'member of F_max' if member else 'not a member of F_max'} (residual {_num(residual)})",
        "CP face: " + ("map is not CP" if cp_member is None else ("member" if cp_member else "not a member")),
    ]
    return report, lines, EXIT_OK


def cmd_choi(args):
    name, T = _get_map(args)
    report = {
        "command": "choi",
        "map": name,
        "dim_in": T.dim_in,
        "dim_out": T.dim_out,
        "choi": matrix_to_json(T.choi, (T.dim_in, T.dim_out)),
    }
    return report, [f"Choi matrix of {name} ({T.dim_in} -> {T.dim_out}):", *_matrix_text(T.choi)], EXIT_OK


# --- parser ---------------------------------------------------------------------------------


def _default_seed() -> int:
    raw = os.environ.get("POSMAP_SEED")
    if raw is None:
        return 0
    if not raw.isdigit():
        raise InputError(f"POSMAP_SEED must be a non-negative integer, got {raw!r}")
    return int(raw)


def build_parser(default_seed: int = 0) -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--tol", type=float, default=1e-9, help="numerical tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=default_seed, help="see-saw seed (default $POSMAP_SEED or 0)")
    common.add_argument("--starts", type=int, default=64, help="random see-saw starts (default 64)")

    p = _Parser(prog="posmap", description="Positive maps on matrix algebras.")
    p.add_argument("--version", action="version", version=f"posmap {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def map_args(sp):
        sp.add_argument("mapfile", nargs="?", help="map JSON file, '-' for stdin")
        sp.add_argument("--map", help="built-in map: identity[:d], transpose[:d], depolarizing[:d], choi3")

    def state_args(sp, positional=True):
        if positional:
            sp.add_argument("statefile", nargs="?", help="state JSON file, '-' for stdin")
        else:
            sp.add_argument("--state-file", dest="statefile", help="state JSON file, '-' for stdin")
        sp.add_argument("--state", help="built-in state: bell, werner:P, isotropic:D:P, mixed:D1:D2")

    def face_args(sp):
        sp.add_argument("--lambda", dest="lam", type=float, required=True)
        sp.add_argument("--y", type=_complex_arg, required=True)
        sp.add_argument("--z", type=_complex_arg, required=True)
        sp.add_argument("--t", type=_complex_arg, default=0j)
        sp.add_argument("--xi-basis", help="matrix file whose columns are xi1, xi2")
        sp.add_argument("--eta-basis", help="matrix file whose columns are eta1, eta2")

    sp = sub.add_parser("classify", parents=[common], help="CP / co-CP / positivity verdict")
    map_args(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("decompose2", parents=[common], help="split an extremal face map on M_2 into co-CP + CP parts")
    face_args(sp)
    sp.set_defaults(func=cmd_decompose2)

    sp = sub.add_parser("face-map", parents=[common], help="build the unital face map on M_2 with given parameters")
    face_args(sp)
    sp.add_argument("--no-check", action="store_true", help="skip the positivity check")
    sp.set_defaults(func=cmd_face_map)

    sp = sub.add_parser("ppt", parents=[common], help="partial-transpose test")
    state_args(sp)
    sp.set_defaults(func=cmd_ppt)

    sp = sub.add_parser("witness", parents=[common], help="apply a positive map as an entanglement witness")
    map_args(sp)
    state_args(sp, positional=False)
    sp.add_argument("--side", choices=["first", "second"], default="first")
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("screen", parents=[common], help="run a list of witnesses on a state")
    state_args(sp)
    sp.add_argument("--maps", nargs="*", help="built-in map names (default transpose:2 transpose:3 choi3)")
    sp.add_argument("--map-file", action="append", help="additional map file (repeatable)")
    sp.set_defaults(func=cmd_screen)

    sp = sub.add_parser("face", parents=[common], help="membership in F_max(p_xi, eta)")
    map_args(sp)
    sp.add_argument("--xi", required=True, help="eK or comma-separated complex components")
    sp.add_argument("--eta", required=True, help="eK or comma-separated complex components")
    sp.set_defaults(func=cmd_face)

    sp = sub.add_parser("choi", parents=[common], help="print the Choi matrix of a map")
    map_args(sp)
    sp.set_defaults(func=cmd_choi)
    return p


def _emit(stream, text: str) -> None:
    stream.write(text)
    stream.flush()


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    try:
        args = build_parser(_default_seed()).parse_args(argv)
        if args.starts < 1 or args.seed < 0 or not args.tol > 0:
            raise InputError("--starts must be >= 1, --seed >= 0 and --tol > 0")
        report, lines, code = args.func(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except InputError as exc:
        return _fail(stdout, stderr, want_json, "input", exc, EXIT_INPUT)
    except DomainError as exc:
        return _fail(stdout, stderr, want_json, "domain", exc, EXIT_DOMAIN)
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to exit 3
        return _fail(stdout, stderr, want_json, "internal", exc, EXIT_INTERNAL)
    report["exit_code"] = code
    _emit(stdout, dumps(report) if args.json else "\n".join(lines) + "\n")
    return code


def _fail(stdout, stderr, want_json: bool, category: str, exc: Exception, code: int) -> int:
    if want_json:
        _emit(stdout, dumps({"error": {"category": category, "type": type(exc).__name__, "message": str(exc)}, "exit_code": code}))
    _emit(stderr, f"error: {exc}\n")
    return code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
