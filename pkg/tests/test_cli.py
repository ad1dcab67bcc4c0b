from pathlib import Path

import pytest

import pqsurf
from pqsurf.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from pqsurf.groups import format_group

DATA = Path(pqsurf.__file__).with_name("data")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_a5(capsys):
    code, out, _ = run(capsys, "invariants", "--group", "A5", "--t1", "0;2,5,5",
                       "--t2", "0;3,3,3,3")
    assert code == EXIT_OK
    assert "g1 = 4" in out and "g2 = 21" in out
    assert "K_S'^2: 8" in out and "(free action)" in out
    assert "H1: Z_3 x Z_3 x Z_15" in out
    assert "pi1 presentation:" in out


def test_invariants_no_cover(capsys):
    code, out, _ = run(capsys, "invariants", "--group", "Z2", "--t1", "0;2,2,2",
                       "--t2", "2^6")
    assert code == EXIT_OK
    assert "no cover" in out


def test_invariants_z5_squared(capsys):
    code, out, _ = run(capsys, "invariants", "--group", "Z5^2", "--t1", "5^3", "--t2", "5^3")
    assert code == EXIT_OK
    assert "K_S'^2: 8" in out and "basket: -" in out


def test_invariants_explicit_vectors(capsys):
    code, out, _ = run(capsys, "invariants", "--group", "S3", "--t1", "2,2,3,3", "--t2", "2^6",
                       "--v1", "(1 2);(1 2);(1 2 3);(1 3 2)",
                       "--v2", "2 1 3;2 1 3;2 1 3;2 1 3;1 3 2;1 3 2")
    assert code == EXIT_OK
    assert "T1: 0;2,2,3,3  g1 = 2" in out and "T2: 0;2,2,2,2,2,2  g2 = 4" in out


def test_invariants_bad_input(capsys):
    assert run(capsys, "invariants", "--group", "M24", "--t1", "2,3,7", "--t2", "2,3,7")[0] == EXIT_USAGE
    assert run(capsys, "invariants", "--group", "S3", "--t1", "2,x", "--t2", "2,2,3")[0] == EXIT_USAGE
    code, _, err = run(capsys, "invariants", "--group", "S3", "--t1", "2,2,3,3", "--t2", "2^6",
                       "--v1", "(1 2);(1 2);(1 2 3);(1 2 3)")
    assert code == EXIT_USAGE and "not a generating vector" in err


def test_cover_shipped_files(capsys):
    code, out, _ = run(capsys, "cover", str(DATA / "burniat.bd"),
                       "--lines", str(DATA / "burniat_m2_nodal.lines"))
    assert code == EXIT_OK
    assert "building data: valid" in out and "irreducible: yes" in out
    assert sum(line.startswith("  z_") for line in out.splitlines()) == 6
    assert "nodal" in out and "K^2 = 4" in out


def test_cover_errors(capsys, tmp_path):
    bad = tmp_path / "bad.bd"
    bad.write_text("lattice delpezzo6\nD 01 1 0 0\n")
    code, _, err = run(capsys, "cover", str(bad))
    assert code == EXIT_USAGE and "line 2" in err
    invalid = tmp_path / "invalid.bd"
    text = (DATA / "burniat.bd").read_text().splitlines()
    text = [line for line in text if not line.startswith("L 2")] + ["L 2 1 0 0 0"]
    invalid.write_text("\n".join(text) + "\n")
    code, out, _ = run(capsys, "cover", str(invalid))
    assert code == EXIT_FAIL and "INVALID" in out
    assert run(capsys, "cover")[0] == EXIT_USAGE
    assert run(capsys, "cover", str(tmp_path / "missing.bd"))[0] == EXIT_USAGE


def test_usage_errors(capsys):
    for argv in (["bogus"], ["classify"], ["classify", "--k2", "9"],
                 ["classify", "--k2", "8", "--max-order", "1"],
                 ["classify", "--k2", "8", "--jobs", "0"]):
        with pytest.raises(SystemExit) as e:
            code = main(argv)
            raise SystemExit(code)
        assert e.value.code == EXIT_USAGE, argv
        capsys.readouterr()


def test_classify_empty_is_success(capsys, tmp_path):
    cat = tmp_path / "triv.cat"
    cat.write_text("group 1 1 1 1\nend\n")
    code, out, _ = run(capsys, "classify", "--k2", "8", "--catalog", str(cat))
    assert code == EXIT_OK
    assert [line for line in out.splitlines() if not line.startswith("#")] == []


def test_classify_output_identical_across_jobs(capsys, tmp_path, catalog):
    cat = tmp_path / "small.cat"
    cat.write_text("\n".join(format_group(G) for G in catalog.restrict(["Z2^3", "Z3^2", "Z4^2"])) + "\n")
    outs = []
    for jobs in ("1", "2"):
        out = tmp_path / f"out{jobs}.tsv"
        assert run(capsys, "classify", "--k2", "2", "--catalog", str(cat), "--jobs", jobs,
                   "--out", str(out))[0] == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert b"16,2,Z4^2" in outs[0]


def test_classify_groups_option(capsys):
    code, out, _ = run(capsys, "classify", "--k2", "8", "--require-free", "--groups", "Z3^2;Z5^2")
    assert code == EXIT_OK
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert [r.split("\t")[4] for r in rows] == ["9,2,Z3^2", "25,2,Z5^2"]
    assert run(capsys, "classify", "--k2", "8", "--groups", "A5", "--jobs", "2")[0] == EXIT_USAGE


def _fixture(tmp_path, *lines):
    path = tmp_path / "rows.tsv"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


ROW = "6\t1/2^2\t0;2,5,5\t0;2,3,3,3\t60,5,A5\t1\tZ_3 x Z_15\trdp-only"


def test_verify_pass(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--fixtures", _fixture(tmp_path, ROW))
    assert code == EXIT_OK
    assert "PASS" in out and "summary:" in out


def test_verify_altered_h1_fails(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--fixtures",
                       _fixture(tmp_path, ROW.replace("Z_3 x Z_15", "Z_45")))
    assert code == EXIT_FAIL
    assert "h1: expected Z_45, got Z_3 x Z_15" in out


def test_verify_mixed_and_missing(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--fixtures", _fixture(
        tmp_path,
        "8\t-\tmixed\tmixed\t64,92,G(64,92)\t1\t?\tfree,mixed-unsupported",
        "8\t-\t0;2,5,5\t0;3^4\t61,1,Nope\t1\tZ_15\tfree"))
    assert code == EXIT_OK
    assert "unverifiable (mixed)" in out
    assert "unverifiable: " in out


def test_verify_bad_fixture(capsys, tmp_path):
    assert run(capsys, "verify", "--fixtures", _fixture(tmp_path, "8\t-"))[0] == EXIT_USAGE
