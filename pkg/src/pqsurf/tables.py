"""Reference fixtures and their verification against the classification pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .classify import FIELDS, ClassificationRecord, classify_task
from .geometry import Basket
from .groups import GroupCatalog
from .orbifold import Signature

MIXED = "mixed"


@dataclass
class FixtureRow:
    k2: int
    basket: str
    t1: str
    t2: str
    group: tuple
    n_families: int | None
    h1: str
    flags: frozenset
    line: int = 0

    @property
    def mixed(self) -> bool:
        return self.t1 == MIXED

    def key(self) -> tuple:
        return (self.k2, self.group[:2], self.t1, self.t2, self.basket, self.h1)

    def label(self) -> str:
        name = self.group[2]
        if self.mixed:
            return f"K2={self.k2} {name} mixed"
        return f"K2={self.k2} {name} ({self.t1})/({self.t2}) {self.basket}"


def parse_fixture_line(text: str, lineno: int = 0) -> FixtureRow:
    parts = text.rstrip("\n").split("\t")
    if len(parts) != len(FIELDS):
        raise ValueError(f"line {lineno}: expected {len(FIELDS)} tab-separated fields")
    if parts[2] == MIXED or parts[3] == MIXED:
        if parts[2] != parts[3]:
            raise ValueError(f"line {lineno}: both signatures must read 'mixed'")
        order, index, name = parts[4].split(",", 2)
        flags = frozenset() if parts[7] == "-" else frozenset(parts[7].split(","))
        n = None if parts[5] == "?" else int(parts[5])
        return FixtureRow(int(parts[0]), str(Basket.parse(parts[1])), MIXED, MIXED,
                          (int(order), int(index), name), n, parts[6], flags, lineno)
    try:
        rec = ClassificationRecord.from_line(text)
    except (ValueError, KeyError) as e:
        raise ValueError(f"line {lineno}: {e}") from None
    # tables list the two signatures in either order; records keep them sorted
    s1, s2 = sorted([Signature.parse(rec.t1), Signature.parse(rec.t2)])
    return FixtureRow(rec.k2, rec.basket, str(s1), str(s2), rec.group,
                      rec.n_families, rec.h1, rec.flags, lineno)


def load_fixtures(path=None) -> list[FixtureRow]:
    if path is None:
        path = Path(__file__).with_name("data") / "tables.tsv"
    rows = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        rows.append(parse_fixture_line(line, lineno))
    return rows


def merge_rows(rows: list[FixtureRow]) -> list[FixtureRow]:
    """Identical rows listed separately stand for distinct families: add N."""
    merged: dict = {}
    for r in rows:
        key = (r.key(), r.line) if r.mixed else r.key()
        m = merged.get(key)
        if m is None:
            merged[key] = FixtureRow(**r.__dict__)
        elif m.n_families is not None and r.n_families is not None:
            m.n_families += r.n_families
    return list(merged.values())


@dataclass
class RowResult:
    row: FixtureRow
    status: str  # pass, fail, unverifiable, unverifiable (mixed)
    diffs: list = field(default_factory=list)  # (field, expected, got)
    n_ordered: int | None = None
    n_unordered: int | None = None

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def format(self) -> str:
        head = f"{self.status.upper() if self.status in ('pass', 'fail') else self.status}: {self.row.label()}"
        out = [head]
        for name, want, got in self.diffs:
            out.append(f"    {name}: expected {want}, got {got}")
        if self.n_unordered is not None and self.n_unordered != self.n_ordered:
            out.append(f"    N ordered={self.n_ordered} unordered={self.n_unordered}")
        return "\n".join(out)


class Verifier:
    """Re-runs one classification task per fixture row, caching per task."""

    def __init__(self, catalog: GroupCatalog):
        self.catalog = catalog
        self._tasks: dict = {}

    def _records(self, G, s1, s2, k2, swap):
        key = (G.label, s1, s2, k2, swap)
        if key not in self._tasks:
            self._tasks[key] = classify_task(G, s1, s2, k2, False, swap)
        return self._tasks[key]

    def check(self, row: FixtureRow) -> RowResult:
        if row.mixed:
            return RowResult(row, "unverifiable (mixed)")
        try:
            G = self.catalog.get(*row.group[:2])
        except KeyError:
            return RowResult(row, "unverifiable")
        s1, s2 = Signature.parse(row.t1), Signature.parse(row.t2)
        recs = self._records(G, s1, s2, row.k2, False)
        res = RowResult(row, "pass")
        same = [r for r in recs if r.basket == row.basket]
        if not recs:
            res.diffs.append(("row", "present", "no surface with these data"))
        elif not same:
            res.diffs.append(("basket", row.basket, " | ".join(sorted({r.basket for r in recs}))))
        else:
            hit = [r for r in same if r.h1 == row.h1]
            if not hit:
                got = " | ".join(sorted(r.h1 for r in same))
                res.diffs.append(("h1", row.h1, got))
            else:
                rec = hit[0]
                res.n_ordered = rec.n_families
                if s1 == s2:
                    sw = [r for r in self._records(G, s1, s2, row.k2, True)
                          if r.basket == row.basket and r.h1 == row.h1]
                    res.n_unordered = sw[0].n_families if sw else None
                else:
                    res.n_unordered = rec.n_families
                if row.n_families is not None and row.n_families not in (
                        res.n_ordered, res.n_unordered):
                    res.diffs.append(("n_families", row.n_families, res.n_ordered))
                if row.flags != rec.flags:
                    res.diffs.append(("flags", ",".join(sorted(row.flags)) or "-",
                                      ",".join(sorted(rec.flags)) or "-"))
        if res.diffs:
            res.status = "fail"
        return res


def verify(rows: list[FixtureRow], catalog: GroupCatalog) -> list[RowResult]:
    v = Verifier(catalog)
    return [v.check(r) for r in merge_rows(rows)]
