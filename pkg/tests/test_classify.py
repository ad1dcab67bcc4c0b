import io
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pqsurf.classify import (
    FLAG_NAMES,
    Bounds,
    ClassificationRecord,
    basket_feasible,
    candidate_signatures,
    classify,
    classify_task,
    kx2_window,
    read_records,
    signature_pairs,
    write_records,
)
from pqsurf.groups import FiniteGroup, GroupCatalog, format_group
from pqsurf.orbifold import Signature
from pqsurf.tables import (
    Verifier,
    load_fixtures,
    merge_rows,
    parse_fixture_line,
    verify,
)

sigs = st.lists(st.integers(2, 9), min_size=3, max_size=6).map(
    lambda ms: str(Signature(0, tuple(sorted(ms)))))
baskets = st.sampled_from(["-", "1/2^2", "1/3,2/3", "2/5^2", "1/2^4,1/3,2/3"])
h1s = st.sampled_from(["0", "Z_15", "Z_3 x Z_15", "Z^2 x Z_4", "Z_2 x Z_2 x Z_4"])
records = st.builds(
    ClassificationRecord,
    st.integers(1, 8), baskets, sigs, sigs,
    st.tuples(st.integers(1, 2000), st.integers(1, 50), st.sampled_from(["A5", "G(16,3)", "Z2^4:S3"])),
    st.one_of(st.none(), st.integers(0, 9)), h1s,
    st.frozensets(st.sampled_from(FLAG_NAMES)),
)


@given(records)
def test_record_round_trip(rec):
    back = ClassificationRecord.from_line(rec.to_line())
    assert back == rec
    assert back.flags == rec.flags
    assert back.to_line() == rec.to_line()


@given(st.lists(records, max_size=5))
def test_write_read_round_trip(recs):
    fh = io.StringIO()
    write_records(recs, fh)
    text = fh.getvalue()
    assert text.startswith("# pqsurf")
    assert read_records(io.StringIO(text)) == recs


@pytest.mark.parametrize("line", [
    "8\t-\t0;2,5,5\t0;3^4\t60,5,A5\t1\tZ_15",
    "8\t-\t0;2,5,5\t0;3^4\t60,5,A5\t1\tZ_15\tshiny",
    "8\t-\t0;2,5,5\t0;3^4\t60,5,A5\tx\tZ_15\tfree",
])
def test_record_parse_errors(line):
    with pytest.raises(ValueError):
        ClassificationRecord.from_line(line)


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds(max_order=1)
    with pytest.raises(ValueError):
        Bounds(max_r=2)
    Bounds(max_order=2, max_r=3, max_m=2)


def test_kx2_window():
    assert kx2_window(8, True) == (8, 8)
    assert kx2_window(2, False) == (2, 20)


def test_basket_feasible():
    # 1/2^2 at K^2 = 6: e excess 12 - 6 - 3 = 3, no K^2 correction
    assert basket_feasible(Fraction(3), Fraction(0), frozenset([2]))
    assert not basket_feasible(Fraction(3), Fraction(0), frozenset([3]))
    assert basket_feasible(Fraction(0), Fraction(0), frozenset())
    assert not basket_feasible(Fraction(-1), Fraction(0), frozenset([2]))


def test_candidate_signatures_integral_genus(catalog):
    G = catalog.find("A5")
    out = candidate_signatures(G, Fraction(1), Bounds())
    assert Signature.parse("2,5,5") in out
    for s in out:
        assert s.orbifold_euler() > 0
        assert (G.order * s.orbifold_euler()) % 2 == 0
        assert all(m in (2, 3, 5) for m in s.multiplicities)


def test_signature_pairs_contain_known(catalog):
    G = catalog.find("A5")
    pairs = signature_pairs(G, 8, Bounds(), require_free=True)
    assert (Signature.parse("2,5,5"), Signature.parse("3^4")) in pairs
    for s1, s2 in pairs:
        assert 2 * G.order * s1.orbifold_euler() * s2.orbifold_euler() == 8


def test_classify_task_a5_k2_6(catalog):
    G = catalog.find("A5")
    recs = classify_task(G, Signature.parse("2,5,5"), Signature.parse("2,3,3,3"), 6, False)
    assert [(r.basket, r.h1, r.n_families) for r in recs] == [("1/2^2", "Z_3 x Z_15", 1)]
    assert recs[0].flags == frozenset(["rdp-only"])


def test_trivial_catalog_is_empty():
    triv = FiniteGroup.from_generators([], 1, label=(1, 1), name="1")
    cat = GroupCatalog({1: [triv]})
    for k2 in range(1, 9):
        assert classify(k2, cat) == []


def test_classify_rejects_bad_k2(catalog):
    with pytest.raises(ValueError):
        classify(9, catalog)
    with pytest.raises(ValueError):
        classify(0, catalog)


def _small_catalog(catalog, tmp_path, names):
    sub = catalog.restrict(names)
    path = tmp_path / "small.cat"
    path.write_text("\n".join(format_group(G) for G in sub) + "\n")
    return sub, path


def test_restricted_sweep_and_jobs_determinism(catalog, tmp_path):
    sub, path = _small_catalog(catalog, tmp_path, ["Z2^3", "Z3^2", "Z4^2"])
    serial = classify(2, sub)
    parallel = classify(2, sub, jobs=2, catalog_path=path)
    assert serial == parallel
    lines = [r.to_line() for r in serial]
    assert "2\t1/2^6\t0;4,4,4\t0;4,4,4\t16,2,Z4^2\t1\tZ_2 x Z_2 x Z_2\trdp-only" in lines
    with pytest.raises(ValueError):
        classify(2, sub, jobs=2)


def test_max_order_bound(catalog):
    sub = catalog.restrict(["Z3^2", "A5"])
    recs = classify(8, sub, Bounds(max_order=10), require_free=True)
    assert [r.group[2] for r in recs] == ["Z3^2"]


# Fixtures and verification --------------------------------------------------------

def test_fixture_file_loads():
    rows = load_fixtures()
    assert sum(r.k2 == 8 and not r.mixed for r in rows) == 12
    merged = merge_rows(rows)
    a5 = [r for r in merged if r.k2 == 5 and r.group[2] == "A5"]
    assert len(a5) == 1 and a5[0].n_families == 2
    assert sum(r.mixed for r in merged) == 3


def test_fixture_signatures_are_sorted():
    row = parse_fixture_line("8\t-\t0;3^4\t0;2,5,5\t60,5,A5\t1\tZ_3^2 x Z_15\tfree")
    assert (row.t1, row.t2) == ("0;2,5,5", "0;3,3,3,3")
    with pytest.raises(ValueError):
        parse_fixture_line("8\t-\tmixed\t0;2,5,5\t64,92,G\t1\t?\tfree")


GOOD = "6\t1/2^2\t0;2,5,5\t0;2,3,3,3\t60,5,A5\t1\tZ_3 x Z_15\trdp-only"


def test_verify_pass_and_altered_h1(catalog):
    v = Verifier(catalog)
    ok = v.check(parse_fixture_line(GOOD))
    assert ok.status == "pass" and ok.ok
    bad = v.check(parse_fixture_line(GOOD.replace("Z_3 x Z_15", "Z_15")))
    assert bad.status == "fail"
    assert bad.diffs == [("h1", "Z_15", "Z_3 x Z_15")]
    assert "h1: expected Z_15, got Z_3 x Z_15" in bad.format()


def test_verify_other_fields(catalog):
    v = Verifier(catalog)
    assert v.check(parse_fixture_line(GOOD.replace("\t1\t", "\t3\t"))).diffs[0][0] == "n_families"
    assert v.check(parse_fixture_line(GOOD.replace("rdp-only", "free"))).diffs[0][0] == "flags"
    assert v.check(parse_fixture_line(GOOD.replace("1/2^2", "1/3,2/3"))).diffs[0][0] == "basket"


def test_verify_unverifiable(catalog):
    rows = [parse_fixture_line("8\t-\tmixed\tmixed\t64,92,G(64,92)\t1\t?\tfree,mixed-unsupported"),
            parse_fixture_line("8\t-\t0;2,5,5\t0;3^4\t61,1,Nope\t1\tZ_15\tfree")]
    res = verify(rows, catalog)
    assert [r.status for r in res] == ["unverifiable (mixed)", "unverifiable"]
    assert all(r.ok for r in res)


def test_verify_reports_both_counts(catalog):
    row = parse_fixture_line("8\t-\t0;5^3\t0;5^3\t25,2,Z5^2\t1\tZ_5^3\tfree")
    res = Verifier(catalog).check(row)
    assert (res.n_ordered, res.n_unordered) == (2, 1)
    assert res.status == "pass"
    assert "N ordered=2 unordered=1" in res.format()
