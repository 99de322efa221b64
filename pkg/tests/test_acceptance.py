"""Acceptance criteria, one test each, at the stated tolerances.

Every test records a PASS/FAIL line (shown in the pytest summary under
"acceptance criteria") before asserting.  Run alone with

    pytest tests/test_acceptance.py -v
"""

import io
import os
import time

import numpy as np

from acceptance_log import record
from cli_corpus import CORPUS, GOLDEN
from oracles import random_hermitian, random_images, random_psd, random_unitary, slice_params
from posmaps import cli
from posmaps.choi import MapSpec, apply_map, choi_of_map, depolarizing_map, identity_map, map_from_kraus, transpose_map
from posmaps.entanglement import (
    bell_state,
    choi_map_3,
    isotropic_state,
    ppt_test,
    random_separable,
    werner_state,
    witness_apply,
)
from posmaps.faces import FaceSpecP, check_face_inclusion, in_maximal_face_P, is_interior_P
from posmaps.linalg import eigvals_hermitian, matrix_unit, partial_transpose
from posmaps.positivity import SeesawConfig, Verdict, ando_choi_psd_2block, classify, min_product_expectation
from posmaps.stormer import (
    FaceMapParams,
    StormerParams,
    ando_choi_inequality,
    build_local_decomposition,
    decompose_extremal,
    face_map_2d,
    schrodinger_split,
    split_form_matrix,
    stormer_extremal,
)


def test_01_choi_round_trip():
    rng = np.random.default_rng(1)
    worst = 0.0
    for d in (2, 3):
        for _ in range(500):
            imgs = random_images(rng, d, d)
            T = choi_of_map(MapSpec(d, d, imgs))
            back = [apply_map(T, matrix_unit(i, j, d)) for i in range(d) for j in range(d)]
            worst = max(worst, max(np.abs(a - b).max() for a, b in zip(back, imgs)))
            worst = max(worst, np.abs(choi_of_map(MapSpec(d, d, back)).choi - T.choi).max())
    ok = worst <= 1e-9
    record(1, ok, "Choi correspondence round trip", f"1000 maps, max error {worst:.1e} <= 1e-9")
    assert ok


def test_02_cp_verdicts():
    tol = 1e-9
    w_id = eigvals_hermitian(identity_map(2).choi)
    w_tr = eigvals_hermitian(transpose_map(2).choi)
    c_dep = classify(depolarizing_map(2))
    ok = (
        np.allclose(w_id, [2, 0, 0, 0], atol=tol)
        and classify(identity_map(2)).verdict is Verdict.CP_ONLY
        and abs(w_tr[-1] + 1) <= tol
        and classify(transpose_map(2)).verdict is Verdict.COCP_ONLY
        and c_dep.verdict is Verdict.CP_AND_COCP
    )
    record(2, ok, "CP verdicts", f"identity eig {np.round(w_id, 12).tolist()}, transpose min eig {w_tr[-1]:.12g}, depolarizing {c_dep.verdict}")
    assert ok


def test_03_worked_decomposition():
    d = decompose_extremal(FaceMapParams(0.25, 0.25, 0.25, 0))
    p1, p2 = d.params1, d.params2
    exact = p1.lam == p2.lam == 0.125 and p1.a == p2.a == 0.5 and p1.b == p2.b == 0.375 and d.c == 0
    sum_err = np.abs(d.H_T1.choi + d.H_T2.choi - d.H_T.choi).max()
    identities = p1.lam + p2.lam == 0.25 and p1.a + p2.a == 1 and p1.t + p2.t == 0 and p1.b + p2.b == 0.75
    psd = d.checks["cp_part_psd"] and d.checks["cocp_part_pt_psd"]
    mins = abs(d.cp_min_eig) <= 1e-10 and abs(d.cocp_min_eig) <= 1e-10
    ok = exact and sum_err <= 1e-12 and identities and psd and mins
    record(3, ok, "worked decomposition", f"lambda_i=1/8, a_i=1/2, b_i=3/8, c=0, sum error {sum_err:.1e}, min eigs {d.cp_min_eig:.1e}/{d.cocp_min_eig:.1e}")
    assert ok


def test_04_random_slice_decompositions():
    rng = np.random.default_rng(4)
    failures = []
    for k in range(1000):
        lam, y, z, t = slice_params(rng)
        p = FaceMapParams(lam, y, z, t, random_unitary(rng, 2), random_unitary(rng, 2))
        d = decompose_extremal(p)
        if not d.valid:
            failures.append((k, d.failed_checks()))
    ok = not failures
    record(4, ok, "randomized decomposition suite", f"1000 admissible draws, {len(failures)} failures")
    assert ok, failures[:5]


def test_05_local_decomposition_both_directions():
    rng = np.random.default_rng(5)
    worst_true = 0.0
    for _ in range(50):
        th = rng.uniform(0, np.pi / 2)
        ph = rng.uniform(-np.pi, np.pi, 2)
        y, z = np.cos(th) / np.sqrt(2) * np.exp(1j * ph[0]), np.sin(th) / np.sqrt(2) * np.exp(1j * ph[1])
        Ux, Ue = random_unitary(rng, 2), random_unitary(rng, 2)
        T = face_map_2d(FaceMapParams(1.0, y, z, 0.0, Ux, Ue), cfg=SeesawConfig(starts=8))
        dec = build_local_decomposition(T, Ux, Ue)
        worst_true = max(worst_true, dec.full_residual(), dec.defining_residual())
    # single-condition perturbations; t != 0 at lambda = 1 leaves the positive cone, checked as a face map
    perturbed = {
        "t=0.1": face_map_2d(FaceMapParams(1.0, 0.5, 0.5, 0.1), check=False),
        "trace!=1": face_map_2d(FaceMapParams(0.5, 0.5, 0.0, 0.0)),
        "weights broken": face_map_2d(FaceMapParams(1.0, 0.5, 0.0, 0.0)),
    }
    residuals = {k: build_local_decomposition(T).full_residual() for k, T in perturbed.items()}
    ok = worst_true <= 1e-9 and all(r > 1e-3 for r in residuals.values())
    detail = f"true branch max residual {worst_true:.1e} <= 1e-9; perturbed " + ", ".join(f"{k}: {r:.3g}" for k, r in residuals.items())
    record(5, ok, "local decomposition both directions", detail)
    assert ok


def test_06_scalar_inequality_vs_psd():
    tol = 1e-9
    lams = np.linspace(0, 0.5, 50)
    zs = np.linspace(0, 0.6, 50)
    ts = np.linspace(0, 0.5, 50)
    disagree, banded, total, n_psd = 0, 0, 0, 0
    for q in (0.25, 0.5, 0.75):
        mats, verdicts = [], []
        for lam in lams:
            for az in zs:
                for at in ts:
                    z, t = az * np.exp(0.37j), at * np.exp(-1.1j)
                    mats.append(split_form_matrix("cp", lam, q, z, t))
                    verdicts.append(ando_choi_inequality(lam, q, z, t, tol))
        lmin = np.linalg.eigvalsh(np.array(mats))[:, 0]
        verdicts = np.array(verdicts)
        psd = lmin >= -tol
        band = np.abs(lmin) < 10 * tol
        disagree += int(np.sum((verdicts != psd) & ~band))
        banded += int(np.sum((verdicts != psd) & band))
        total += lmin.size
        n_psd += int(np.sum(psd))
    ok = disagree == 0
    record(6, ok, "scalar inequality vs PSD", f"{total} grid points ({n_psd} PSD), {disagree} disagreements outside the 10*tol band ({banded} inside)")
    assert ok


def test_07_ando_choi_agreement():
    rng = np.random.default_rng(7)
    agree, skipped, n = 0, 0, 1000
    for k in range(n):
        kind = k % 3
        if kind == 0:
            M = random_psd(rng, 6)
        elif kind == 1:
            M = random_hermitian(rng, 6) + rng.uniform(0, 4) * np.eye(6)
        else:
            M = random_psd(rng, 6, rank=int(rng.integers(1, 6))) + rng.choice([-1, 1]) * rng.uniform(1e-4, 0.05) * np.eye(6)
        lmin = np.linalg.eigvalsh(M)[0]
        if abs(lmin) < 1e-8:
            skipped += 1
            continue
        agree += ando_choi_psd_2block(M[:3, :3], M[:3, 3:], M[3:, 3:]) == (lmin > 0)
    ok = agree == n - skipped
    record(7, ok, "Schur complement vs eigen test", f"{agree}/{n - skipped} agree ({skipped} in the 1e-8 band skipped)")
    assert ok


def test_08_face_theory():
    rng = np.random.default_rng(8)
    e1, e2 = np.eye(2)
    transpose_in = in_maximal_face_P(transpose_map(2), FaceSpecP(e1, e2))
    face_ok, boundary_ok, n_face = True, True, 0
    for k in range(200):
        lam, y, z, t = slice_params(rng) if k % 2 else (rng.uniform(0.1, 1), 0.2 * rng.uniform(), 0.1 * rng.uniform(), 0)
        p = FaceMapParams(lam, y, z, t, random_unitary(rng, 2), random_unitary(rng, 2))
        T = face_map_2d(p, check=(k % 20 == 0), cfg=SeesawConfig(starts=8))
        face_ok &= in_maximal_face_P(T, FaceSpecP(p.xi, p.eta))
        if k % 20 == 0:
            boundary_ok &= not is_interior_P(T, samples=32, cfg=SeesawConfig(starts=8))
        n_face += 1
    implication = 0
    for _ in range(500):
        d = int(rng.integers(2, 4))
        xi, eta = random_unitary(rng, d)[:, 0], random_unitary(rng, d)[:, 0]
        V = np.outer(eta, xi.conj())
        ops = []
        for _ in range(int(rng.integers(1, 4))):
            W = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            ops.append(W - np.trace(V.conj().T @ W) * V)
        inc = check_face_inclusion(map_from_kraus(ops), xi, eta)
        implication += inc.cp_face and inc.implication_holds
    dep = is_interior_P(depolarizing_map(2))
    ident = is_interior_P(identity_map(2))
    ok = transpose_in and face_ok and implication == 500 and dep.interior and not ident.interior and boundary_ok
    detail = (
        f"transpose in face {transpose_in}; {n_face} face maps in face {face_ok}; "
        f"CP-face implies P-face {implication}/500; depolarizing interior {dep.interior} "
        f"(min eig {dep.min_eig:.3g}), identity boundary {not ident.interior}, face members boundary {boundary_ok}"
    )
    record(8, ok, "face theory", detail)
    assert ok


def _screened_witnesses():
    maps = {
        "transpose2": transpose_map(2),
        "transpose3": transpose_map(3),
        "choi3": choi_map_3(),
        "stormer": stormer_extremal(StormerParams(0.5, 0.5, 0.5, 1.0, 1j / np.sqrt(2))),
        "face": face_map_2d(FaceMapParams(0.25, 0.25, 0.25, 0)),
    }
    screened = {}
    for name, T in maps.items():
        c = classify(T)
        assert c.verdict is not Verdict.NOT_POSITIVE, name
        screened[name] = (T, c)
    return screened


def test_09_entanglement_pipeline():
    tol = 1e-9
    bell = ppt_test(bell_state())
    bell_ok = bell.entangled and abs(bell.min_eig + 0.5) <= 1e-10
    ps = np.linspace(0, 1, 200)
    flags = np.array([ppt_test(werner_state(p), tol).entangled for p in ps])
    threshold = ps[np.argmax(flags)]
    sweep_ok = bool(np.all(flags[ps < 1 / 3 - 0.01] == False) and np.all(flags[ps > 1 / 3 + 0.01]))  # noqa: E712
    sweep_ok &= bool(np.all(flags[np.argmax(flags):]))
    rng = np.random.default_rng(9)
    screened = _screened_witnesses()
    worst, flagged, applications = np.inf, 0, 0
    dims = [(2, 2), (2, 3), (3, 2), (3, 3)]
    for k in range(2000):
        d1, d2 = dims[k % 4]
        rho = random_separable(d1, d2, rng)
        for name, (T, c) in screened.items():
            for side, d in (("first", d1), ("second", d2)):
                if T.dim_out != d:
                    continue
                rep = witness_apply(T, rho, side, tol, screened=c, name=name)
                applications += 1
                worst = min(worst, rep.min_eig)
                flagged += rep.min_eig < -10 * tol
    ok = bell_ok and sweep_ok and flagged == 0
    detail = (
        f"Bell min eig {bell.min_eig:.12g}; Werner flips at p = {threshold:.4f} (1/3 +- 0.01); "
        f"2000 separable states, {applications} witness applications, {flagged} flagged, worst min eig {worst:.2e}"
    )
    record(9, ok, "entanglement pipeline", detail)
    assert ok


def test_10_choi_map_candidate():
    T = choi_map_3()
    lmin = eigvals_hermitian(T.choi)[-1]
    lmin_pt = eigvals_hermitian(partial_transpose(T.choi, 3, 3))[-1]
    seesaw = min_product_expectation(T.choi, 3, 3, SeesawConfig(starts=256)).value
    rep = witness_apply(T, isotropic_state(3, 1.0))
    ok = lmin <= -0.1 and lmin_pt <= -0.1 and seesaw >= -1e-9 and rep.entangled
    record(10, ok, "non-decomposable candidate", f"Choi min eig {lmin:.6g}, PT min eig {lmin_pt:.6g}, 256-start see-saw min {seesaw:.2e}, isotropic p=1 witness min eig {rep.min_eig:.6g}")
    assert ok


def test_11_jordan_rank_property():
    rng = np.random.default_rng(11)
    worst_third, worst_weight = 0.0, 0.0
    for k in range(200):
        n = 2 + k % 3
        W = np.linalg.qr(rng.normal(size=(2 * n, n)) + 1j * rng.normal(size=(2 * n, n)))[0]
        u, v = random_unitary(rng, n), random_unitary(rng, n)
        f = rng.normal(size=n) + 1j * rng.normal(size=n)
        js = schrodinger_split(W, u, v, f)
        w = np.linalg.eigvalsh(js.image)[::-1]
        if n > 2:
            worst_third = max(worst_third, abs(w[2]))
        worst_weight = max(worst_weight, abs(js.weight_morphism + js.weight_antimorphism - 1))
    ok = worst_third <= 1e-9 and worst_weight <= 1e-9
    record(11, ok, "Jordan rank property", f"200 constructions, max third eigenvalue {worst_third:.1e}, max |lambda + lambda' - 1| {worst_weight:.1e}")
    assert ok


def test_12_cli_determinism(monkeypatch):
    monkeypatch.chdir(GOLDEN)
    monkeypatch.delenv("POSMAP_SEED", raising=False)
    mismatched, bad_codes = [], []
    for name, argv, code in CORPUS:
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            got = cli.main(argv, stdout=buf, stderr=io.StringIO())
            outs.append(buf.getvalue())
            if got != code:
                bad_codes.append(name)
        if outs[0] != outs[1] or outs[0] != (GOLDEN / f"{name}.json").read_text():
            mismatched.append(name)
    ok = not mismatched and not bad_codes
    record(12, ok, "CLI determinism and golden files", f"{len(CORPUS)} commands x 2 runs, {len(mismatched)} byte mismatches, {len(set(bad_codes))} exit-code violations")
    assert ok, (mismatched, bad_codes)


if __name__ == "__main__":
    import pytest

    raise SystemExit(pytest.main([__file__, "-q"]))
