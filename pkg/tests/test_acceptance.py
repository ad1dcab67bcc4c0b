"""End-to-end acceptance checks, one test per criterion.

Every test records a PASS/FAIL line that is repeated in the terminal summary.
"""

import itertools
import random
import time
from fractions import Fraction
from math import gcd

import pytest

from oracles import brute_force_vector_count, determinant, minor_gcd
from pqsurf.classify import classify, families
from pqsurf.covers import (
    BURNIAT_CHAR,
    DEL_PEZZO_6,
    ELLIPTIC_PRODUCT,
    burniat_building_data,
    burniat_configuration,
    burniat_names,
    cover_equations,
    double_cover_invariants,
    free_quotient,
    is_cover_irreducible,
    parse_lines,
    validate_building_data,
)
from pqsurf.geometry import (
    SingularityType,
    action_is_free,
    hj_expansion,
    hj_value,
    resolution_correction,
    surface_invariants,
)
from pqsurf.orbifold import Signature, enumerate_generating_vectors
from pqsurf.pi1 import smith_normal_form
from pqsurf.tables import Verifier, load_fixtures, merge_rows

from test_covers import DATA, _relation_key

pytestmark = pytest.mark.acceptance

_SWEEPS: dict = {}


def _sweep(catalog, k2, **kw):
    key = (k2, tuple(sorted(kw.items())))
    if key not in _SWEEPS:
        _SWEEPS[key] = classify(k2, catalog, **kw)
    return _SWEEPS[key]


def _fixture_rows(k2s):
    return [r for r in merge_rows(load_fixtures()) if r.k2 in k2s and not r.mixed]


def test_criterion_1_free_k2_8_block(catalog, criterion):
    recs = _sweep(catalog, 8, require_free=True)
    got = {(r.t1, r.t2, r.group[:2]): r for r in recs}
    want = _fixture_rows({8})
    problems = []
    for row in want:
        rec = got.get((row.t1, row.t2, row.group[:2]))
        if rec is None:
            problems.append(f"{row.label()}: missing")
        elif rec.h1 != row.h1:
            problems.append(f"{row.group[2]} H1 {rec.h1} != {row.h1}")
    extra = set(got) - {(r.t1, r.t2, r.group[:2]) for r in want}
    problems += [f"unexpected row {k}" for k in sorted(extra)]
    n = {r.group[2]: r.n_families for r in recs if r.group[2] in ("A5", "Z5^2")}
    a5 = [r.n_families for r in recs if r.group[2] == "A5"]
    if a5 != [1, 1, 1] or n.get("Z5^2") != 2:
        problems.append(f"N mismatch: A5 {a5}, Z5^2 {n.get('Z5^2')}")
    criterion(1, not problems, f"{len(want) - len(problems)}/{len(want)} rows; " + "; ".join(problems))
    assert not problems


def test_criterion_2_k2_6_5_4_rows(catalog, criterion):
    v = Verifier(catalog)
    results = [v.check(r) for r in _fixture_rows({6, 5, 4})]
    bad = [r.format() for r in results if r.status != "pass"]
    inv = {}
    for name, t1, t2, basket in [("A5", "3,5^2", "2^3,3", "1/3,2/3"),
                                 ("A5", "2^3,5", "3^2,5", "2/5^2")]:
        G = catalog.find(name)
        for fam in families(G, Signature.parse(t1), Signature.parse(t2))[0]:
            i = surface_invariants(fam.V1, fam.V2)
            if i.chi == 1 and str(i.basket) == basket:
                inv[basket] = i.kx2
    if inv != {"1/3,2/3": Fraction(16, 3), "2/5^2": Fraction(24, 5)}:
        bad.append(f"K_X^2 values {inv}")
    criterion(2, not bad, f"{len(results)} rows checked; " + "; ".join(bad))
    assert not bad


def test_criterion_3_spot_rows(catalog, criterion):
    v = Verifier(catalog)
    rows = [r for r in _fixture_rows({2, 1})
            if (r.group[2], r.basket) in (("Z4^2", "1/2^6"), ("S4", "1/2^4,1/3,2/3"))]
    results = [v.check(r) for r in rows]
    want = {("Z4^2", "0;4,4,4", "0;4,4,4", "Z_2 x Z_2 x Z_2"),
            ("S4", "0;2,2,2,3", "0;3,4,4", "Z_4")}
    seen = {(r.row.group[2], r.row.t1, r.row.t2, r.row.h1) for r in results if r.status == "pass"}
    ok = seen == want and len(results) == 2
    criterion(3, ok, "; ".join(r.format() for r in results if r.status != "pass"))
    assert ok


def test_criterion_4_free_iff_k2_8(catalog, criterion):
    runs = [_sweep(catalog, 8, require_free=True)]
    runs += [_sweep(catalog, k2) for k2 in range(1, 8)]
    checked, bad = 0, []
    for recs in runs:
        for r in recs:
            G = catalog.get(*r.group[:2])
            for fam in families(G, Signature.parse(r.t1), Signature.parse(r.t2))[0]:
                inv = surface_invariants(fam.V1, fam.V2)
                if inv.chi != 1 or inv.ks2 != r.k2 or str(inv.basket) != r.basket:
                    continue
                checked += 1
                if action_is_free(fam.V1, fam.V2) != (inv.ks2 == 8):
                    bad.append(r.to_line())
            if ("free" in r.flags) != (r.k2 == 8):
                bad.append(r.to_line())
    ok = not bad and checked > 0
    criterion(4, ok, f"{checked} families over {sum(map(len, runs))} records")
    assert ok


def test_criterion_5_hirzebruch_jung(criterion):
    bad = []
    for n in range(2, 51):
        for a in range(1, n):
            if gcd(a, n) != 1:
                continue
            bs = hj_expansion(n, a)
            corr = resolution_correction(SingularityType(n, a))
            if hj_value(bs) != Fraction(n, a) or min(bs) < 2:
                bad.append(f"HJ {n},{a}")
            if corr < 0 or (corr == 0) != (a == n - 1):
                bad.append(f"correction {n},{a}")
    if resolution_correction(SingularityType(4, 1)) != 1:
        bad.append("1/4(1,1)")
    criterion(5, not bad, "; ".join(bad[:5]))
    assert not bad


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def test_criterion_6_smith_normal_form(criterion):
    rnd = random.Random(20240601)
    start = time.perf_counter()
    bad = []
    for trial in range(500):
        m, n = rnd.randint(1, 8), rnd.randint(1, 8)
        M = [[rnd.randint(-20, 20) for _ in range(n)] for _ in range(m)]
        if trial % 7 == 0:  # force rank deficiency now and then
            M[-1] = [2 * x for x in M[0]]
        S, U, V = smith_normal_form(M)
        k = min(m, n)
        d = [S[i][i] for i in range(k)]
        if _matmul(_matmul(U, M), V) != S:
            bad.append(f"{trial}: UMV != S")
        if abs(determinant(U)) != 1 or abs(determinant(V)) != 1:
            bad.append(f"{trial}: not unimodular")
        if any(S[i][j] for i in range(m) for j in range(n) if i != j) or min(d) < 0:
            bad.append(f"{trial}: not diagonal")
        if any(b != 0 and (a == 0 or b % a) for a, b in zip(d, d[1:])):
            bad.append(f"{trial}: divisibility")
        for j in sorted({1, 2, k} & set(range(1, k + 1))):
            prod = 1
            for x in d[:j]:
                prod *= x
            if minor_gcd(M, j) != prod:
                bad.append(f"{trial}: minors of size {j}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    criterion(6, ok, f"500 matrices in {elapsed:.1f}s; " + "; ".join(bad[:5]))
    assert ok


def test_criterion_7_vector_oracle(catalog, criterion):
    groups = [G for G in catalog if G.order <= 24]
    sigs = [Signature(0, ms) for r in range(1, 5)
            for ms in itertools.combinations_with_replacement(range(2, 7), r)]
    bad, nonzero = [], 0
    for G in groups:
        for s in sigs:
            fast = len(enumerate_generating_vectors(G, s))
            if fast != brute_force_vector_count(G, s.multiplicities):
                bad.append(f"{G.name} {s}")
            nonzero += fast > 0
    criterion(7, not bad, f"{len(groups)} groups x {len(sigs)} signatures, "
              f"{nonzero} non-empty; " + "; ".join(bad[:5]))
    assert not bad


def test_criterion_8_abelian_covers(criterion):
    bad = []
    bd = burniat_building_data()
    if validate_building_data(bd) or not is_cover_irreducible(bd):
        bad.append("Burniat data invalid")
    L = DEL_PEZZO_6.cls([1, 0, 0, 0])
    E = {i: DEL_PEZZO_6.cls([0] + [int(j == (i - 1) % 3) for j in range(3)]) for i in range(5)}
    Ls = bd.derived_L()
    for i in (1, 2, 3):
        if 2 * Ls[BURNIAT_CHAR[(i - 2) % 3 + 1]] != 6 * L - 4 * E[i - 1] - 2 * E[i + 1]:
            bad.append(f"2L_{i}")
    z_name, x_name = burniat_names()
    got = sorted(_relation_key(rel.format(z_name, x_name)) for rel in cover_equations(bd))
    want = sorted(map(_relation_key, ["u1u2 = δ1 u3", "u1^2 = δ1 δ3", "u2u3 = δ2 u1",
                                      "u2^2 = δ1 δ2", "u1u3 = δ3 u2", "u3^2 = δ2 δ3"]))
    if got != want:
        bad.append("bidouble equations")
    k2, chi = double_cover_invariants(ELLIPTIC_PRODUCT, 0, 0, ELLIPTIC_PRODUCT.cls([2, 2]))
    if (k2, chi) != (16, 4) or free_quotient(k2, chi, 4) != (4, 1):
        bad.append(f"Keum-Naie {(k2, chi)}")
    for name, m in [("burniat_m0.lines", 0), ("burniat_m1.lines", 1), ("burniat_m2.lines", 2)]:
        conf = burniat_configuration(parse_lines((DATA / name).read_text()))
        if conf.m != m or conf.k2 != 6 - m:
            bad.append(f"{name}: m={conf.m}")
    criterion(8, not bad, "; ".join(bad))
    assert not bad
