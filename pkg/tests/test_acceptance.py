"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line."""

import io
import random
import time

import pytest

from anabelia.arith import divisors
from anabelia.cli import main
from anabelia.counting import (CurveHandle, divisor_class_sequence, exact_residue_count,
                               is_principal, unit_image_lattice)
from anabelia.errors import OracleRejected
from anabelia.field import gf
from anabelia.function_field import Mobius, Place, places_of_degree
from anabelia.hyperelliptic import (HyperellipticCurve, p_primary_exponent, predicted_count,
                                    torsion_probe)
from anabelia.poly import Polynomial
from anabelia.recovery import (ADVERSARIAL_KINDS, adversarial_oracle, random_oracle,
                               recover_field_embedding, verify_embedding)


@pytest.fixture
def verdict(capsys):
    def say(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return say


def elliptic():
    return HyperellipticCurve.from_coeffs(3, 1, [0, 1, 0, 1])


def genus2():
    return HyperellipticCurve.from_coeffs(3, 1, [0, 1, 0, 0, 0, 1])


def test_criterion_1_moebius_counting(verdict):
    t0 = time.perf_counter()
    bad = []
    handles = [CurveHandle.rational(p) for p in (2, 3, 5)]
    handles.append(CurveHandle.hyperelliptic(elliptic()))
    for h in handles:
        for N in range(1, 7):
            # exact_residue_count raises unless the Moebius sum equals direct classification
            n = exact_residue_count(h, N)
            if sum(exact_residue_count(h, k) for k in divisors(N)) != h.count(N):
                bad.append((h, N))
            if h.curve is None and n != N * len(places_of_degree(h.field, N)):
                bad.append((h, N, n))
    derived = (exact_residue_count(handles[0], 2), exact_residue_count(handles[3], 2))
    dt = time.perf_counter() - t0
    ok = not bad and derived == (2, 12) and dt < 5
    verdict(1, ok, f"24 cases exact, P1/F2 N=2 -> {derived[0]}, elliptic N=2 -> {derived[1]}, "
                   f"{dt:.2f}s")


def test_criterion_2_zeta(verdict):
    t0 = time.perf_counter()
    details = []
    ok = True
    for C in (elliptic(), genus2()):
        L = C.l_polynomial()
        g = C.genus
        counts = [C.count_points(m) for m in range(1, 2 * g + 3)]
        pred = [predicted_count(L, m) for m in range(1, 2 * g + 3)]
        a1 = L.coeffs[1]
        ok &= counts == pred and L.functional_equation_holds() and a1 * a1 <= 4 * g * g * C.q
        details.append(f"g={g} L={list(L.coeffs)} m<={2 * g + 2}")
    dt = time.perf_counter() - t0
    verdict(2, ok and dt < 30, "; ".join(details) + f", {dt:.2f}s")


def test_criterion_3_group_laws(verdict):
    t0 = time.perf_counter()
    ok = True
    n_triples = 1000
    for C in (elliptic(), genus2()):
        J = C.enumerate_jacobian()
        N = C.jacobian_order()
        O = C.identity()
        rng = random.Random(2024)
        for _ in range(n_triples):
            a, b, c = (rng.choice(J) for _ in range(3))
            ok &= (a + b) + c == a + (b + c)
            ok &= a + O == a and O + a == a
            ok &= (a + (-a)).is_identity()
            ok &= (a * N).is_identity()
        pts = C.points(1)
        ok &= all(C.class_of_difference(P, Q).is_identity() == (P == Q) for P in pts for Q in pts)
    dt = time.perf_counter() - t0
    verdict(3, ok and dt < 30, f"{n_triples} triples per curve, diagonal exhaustive, {dt:.2f}s")


def test_criterion_4_torsion_probe(verdict):
    C = elliptic()
    r3 = [torsion_probe(C, 1, [3]).pairs for _ in range(2)]
    r2 = [torsion_probe(C, 1, [2]).pairs for _ in range(2)]
    pts = C.points(1)
    all_pairs = {frozenset((P, Q)) for P in pts for Q in pts if P != Q}
    ok = (r3[0] == r3[1] == [] and r2[0] == r2[1] and len(r2[0]) == 6
          and {frozenset(p) for p in r2[0]} == all_pairs)
    verdict(4, ok, f"sigma={{3}} -> {len(r3[0])} pairs, sigma={{2}} -> {len(r2[0])} pairs")


def test_criterion_5_class_sequence(verdict):
    F3 = gf(3)
    p1 = CurveHandle.rational(3)
    ok = True
    for E in ([], [Place(F3, Polynomial.x(F3))], [Place.infinite(F3)]):
        for sigma in ([2], [3], [2, 5]):
            ok &= divisor_class_sequence(p1, E, sigma).quotient_invariants == []
    e = CurveHandle.hyperelliptic(elliptic())
    q3 = divisor_class_sequence(e, [], [3]).quotient_invariants
    q2 = divisor_class_sequence(e, [], [2]).quotient_invariants
    ok &= q3 == [] and q2 == [4]
    verdict(5, ok, f"P1 -> [], elliptic sigma={{3}} -> {q3}, sigma={{2}} -> {q2}")


def test_criterion_6_lattice(verdict):
    F3 = gf(3)
    p1 = CurveHandle.rational(3)
    S1 = [Place(F3, Polynomial.x(F3)), Place.infinite(F3)]
    b1 = unit_image_lattice(p1, S1)
    e = CurveHandle.hyperelliptic(elliptic())
    C = e.curve
    S2 = [C.places_of_degree(1)[0], C.place_at_point(2, 1)]
    b2 = unit_image_lattice(e, S2)
    ok = (b1 in ([[1, -1]], [[-1, 1]]) and b2 in ([[4, -4]], [[-4, 4]])
          and all(is_principal(p1, S1, v) for v in b1) and all(is_principal(e, S2, v) for v in b2))
    verdict(6, ok, f"P1 basis {b1}, elliptic basis {b2}, all principal")


def test_criterion_7_recovery(verdict):
    t0 = time.perf_counter()
    failures = []
    n = 50
    for i in range(n):
        q = (5, 7, 9, 11, 13)[i % 5]
        s = (i // 5) % 2
        o = random_oracle(q, s, seed=1000 + i)
        F = o.field
        P = o.params
        emb, tr = recover_field_embedding(o, seed=i)
        expected_T = Mobius(F, *P["mobius"]).as_function().frobenius_power(s)
        K = o.tower.level(tr.certified_level)
        cert_ok = (len(tr.certificate) == K.q
                   and sorted(r[0] for r in tr.certificate) == list(range(K.q))
                   and all(r[2] == K.add(r[1], 1) for r in tr.certificate))
        vr = verify_embedding(emb, o, trials=200, seed=i)
        if not (emb.T == expected_T and emb.kappa == (P["a"] + s) % F.d and emb.e == F.p**s
                and vr.passed and cert_ok):
            failures.append(i)
    dt = time.perf_counter() - t0
    verdict(7, not failures and dt < 300,
            f"{n - len(failures)}/{n} oracles recovered exactly, 200 trials each, {dt:.1f}s")


def test_criterion_8_negative_suite(verdict):
    t0 = time.perf_counter()
    per_kind = 30
    rejected = {k: 0 for k in ADVERSARIAL_KINDS}
    for kind in ADVERSARIAL_KINDS:
        for i in range(per_kind):
            q = (5, 7, 9, 11, 13)[i % 5]
            s = (i // 5) % 2
            base = random_oracle(q, s, seed=500 + i)
            P = base.params
            bad = adversarial_oracle(kind, base.tower, P["a"], Mobius(base.field, *P["mobius"]),
                                     s, base.E_X, seed=i)
            try:
                recover_field_embedding(bad, seed=i)
            except OracleRejected as ex:
                if ex.witness:
                    rejected[kind] += 1
    codes = {}
    for kind in ADVERSARIAL_KINDS:
        out, err = io.StringIO(), io.StringIO()
        codes[kind] = main(["recover", "--oracle", kind, "--field", "7", "--no-timings"],
                           stdout=out, stderr=err)
    dt = time.perf_counter() - t0
    ok = all(v == per_kind for v in rejected.values()) and set(codes.values()) == {1}
    verdict(8, ok, f"rejected {rejected} of {per_kind} each, CLI exit codes {sorted(set(codes.values()))}, "
                   f"{dt:.1f}s")


def test_criterion_9_primary_exponent(verdict):
    C = elliptic()
    e3, e2 = p_primary_exponent(C, 3), p_primary_exponent(C, 2)
    verdict(9, (e3, e2) == (1, 4), f"r=3 -> {e3}, r=2 -> {e2}")


def test_criterion_10_determinism(verdict, tmp_path):
    spec = tmp_path / "e33.toml"
    spec.write_text("p=3 d=1 model=hyperelliptic f_coeffs=[0,1,0,1]\n")
    g2 = tmp_path / "g2.toml"
    g2.write_text("p=3 model=hyperelliptic f_coeffs=[0,1,0,0,0,1]\n")
    c5 = tmp_path / "c5.toml"
    c5.write_text("p=5 model=hyperelliptic f_coeffs=[1,2,0,1]\n")
    commands = [
        ["zeta", "--curve", str(g2)],
        ["count", "--curve", str(c5), "--m", "6"],  # 15625 x-values: the threaded path
        ["count", "--curve", str(spec), "--m", "6"],
        ["torsion-probe", "--curve", str(spec), "--sigma", "2", "--m", "2"],
        ["class-sequence", "--curve", str(g2), "--sigma", "2,3"],
        ["recover", "--oracle", "random", "--field", "11", "--s", "1", "--seed", "7"],
        ["recover", "--oracle", "order-scramble", "--field", "9", "--seed", "2"],
    ]
    ok = True
    for argv in commands:
        outs = set()
        for threads in ("1", "1", "4"):
            out = io.StringIO()
            main(argv + ["--no-timings", "--threads", threads], stdout=out, stderr=io.StringIO())
            outs.add(out.getvalue())
        ok &= len(outs) == 1
    verdict(10, ok, f"{len(commands)} commands byte-identical over 2 runs and 1 vs 4 threads")
