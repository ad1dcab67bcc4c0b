"""Classification sweeps: groups x signature pairs -> surfaces with chi = 1."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable

from .geometry import (
    Basket,
    InconsistentInvariants,
    canonical_type,
    hj_expansion,
    is_rdp,
    resolution_correction,
    surface_invariants,
)
from .groups import FiniteGroup, GroupCatalog, automorphism_generators, load_catalog
from .orbifold import (
    GeneratingVector,
    Signature,
    braid_orbits,
    enumerate_generating_vectors,
    family_orbits,
)
from .pi1 import AbelianInvariants, abelianization, pi1_presentation

TOOL_VERSION = "pqsurf 0.1.0"
FIELDS = ("k2", "basket", "t1", "t2", "group", "n_families", "h1", "flags")
FLAG_NAMES = ("free", "rdp-only", "minimality-unverified", "mixed-unsupported")


@dataclass(frozen=True)
class Bounds:
    max_order: int | None = None
    max_r: int = 6
    max_m: int | None = None

    def __post_init__(self):
        if self.max_order is not None and self.max_order < 2:
            raise ValueError("max_order must be at least 2")
        if self.max_r < 3:
            raise ValueError("max_r must be at least 3")


@dataclass(frozen=True, order=True)
class ClassificationRecord:
    k2: int
    basket: str
    t1: str
    t2: str
    group: tuple  # (order, index, name)
    n_families: int | None
    h1: str
    flags: frozenset = field(default=frozenset(), compare=False)

    def sort_key(self):
        return (-self.k2, self.basket, self.group[:2], self.t1, self.t2, self.h1)

    def to_line(self) -> str:
        order, index, name = self.group
        n = "?" if self.n_families is None else str(self.n_families)
        flags = ",".join(f for f in FLAG_NAMES if f in self.flags) or "-"
        return "\t".join([str(self.k2), self.basket, self.t1, self.t2,
                          f"{order},{index},{name}", n, self.h1, flags])

    @classmethod
    def from_line(cls, line: str) -> "ClassificationRecord":
        parts = line.rstrip("\n").split("\t")
        if len(parts) != len(FIELDS):
            raise ValueError(f"expected {len(FIELDS)} tab-separated fields, got {len(parts)}")
        k2, basket, t1, t2, group, n, h1, flags = parts
        order, index, name = group.split(",", 2)
        fl = frozenset() if flags == "-" else frozenset(flags.split(","))
        unknown = fl - set(FLAG_NAMES)
        if unknown:
            raise ValueError(f"unknown flags {sorted(unknown)}")
        return cls(int(k2), str(Basket.parse(basket)), str(Signature.parse(t1)),
                   str(Signature.parse(t2)), (int(order), int(index), name),
                   None if n == "?" else int(n), str(AbelianInvariants.parse(h1)), fl)

    def __eq__(self, other):
        return isinstance(other, ClassificationRecord) and self.to_line() == other.to_line()

    def __hash__(self):
        return hash(self.to_line())


def header() -> str:
    return f"# {TOOL_VERSION}\n#" + "\t".join(FIELDS)


def write_records(records: Iterable[ClassificationRecord], fh) -> None:
    fh.write(header() + "\n")
    for r in records:
        fh.write(r.to_line() + "\n")


def read_records(fh) -> list[ClassificationRecord]:
    out = []
    for line in fh:
        if not line.strip() or line.startswith("#"):
            continue
        out.append(ClassificationRecord.from_line(line))
    return out


# Signature enumeration ---------------------------------------------------------

def candidate_signatures(G: FiniteGroup, theta_max: Fraction, bounds: Bounds) -> list[Signature]:
    """Genus-0 signatures with 0 < Theta <= theta_max whose multiplicities are
    element orders of G and whose covers have integral genus >= 2."""
    orders = [m for m in G.exponent_orders() if m >= 2 and (bounds.max_m is None or m <= bounds.max_m)]
    out = []

    def rec(start: int, ms: list, theta: Fraction):
        if len(ms) >= 3 and theta > 0:
            sig = Signature(0, tuple(ms))
            two_g_minus_2 = G.order * theta
            if two_g_minus_2.denominator == 1 and two_g_minus_2 % 2 == 0 and two_g_minus_2 >= 2:
                out.append(sig)
        if len(ms) == bounds.max_r:
            return
        for k in range(start, len(orders)):
            t = theta + 1 - Fraction(1, orders[k])
            if t > theta_max:
                break  # every later term only adds, and larger m add more
            rec(k, ms + [orders[k]], t)

    rec(0, [], Fraction(-2))
    return sorted(set(out))


def kx2_window(k2: int, require_free: bool) -> tuple[Fraction, Fraction]:
    """Range of K_X^2 compatible with K_S'^2 = k2 and chi = 1.

    12 = K_S'^2 + e(S') and e(S') = K_X^2 / 2 + sum(1 - 1/n + len(HJ)) >= K_X^2 / 2
    give K_X^2 <= 24 - 2 k2; K_X^2 >= K_S'^2 since the corrections are >= 0.
    """
    if require_free:
        return Fraction(k2), Fraction(k2)
    return Fraction(k2), Fraction(24 - 2 * k2)


@lru_cache(maxsize=None)
def _type_costs(n: int) -> tuple:
    """(Euler-number excess, K^2 correction) of each canonical type 1/n(1,a)."""
    out = set()
    for a in range(1, n):
        if gcd(a, n) == 1:
            t = canonical_type(n, a)
            out.add((1 - Fraction(1, n) + len(hj_expansion(t.n, t.a)), resolution_correction(t)))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def basket_feasible(euler_excess: Fraction, k_excess: Fraction, ns: frozenset) -> bool:
    """Is there a multiset of types 1/n(1,a), n in ``ns``, whose Euler
    contributions sum to ``euler_excess`` and corrections to ``k_excess``?"""
    costs = sorted({c for n in ns for c in _type_costs(n)})

    def rec(start, e, k):
        if e == 0 and k == 0:
            return True
        for idx in range(start, len(costs)):
            ce, ck = costs[idx]
            if ce <= e and ck <= k and rec(idx, e - ce, k - ck):
                return True
        return False

    if euler_excess < 0 or k_excess < 0:
        return False
    return rec(0, euler_excess, k_excess)


def _stabilizer_orders(s1: Signature, s2: Signature) -> frozenset:
    ns = set()
    for m in s1.multiplicities:
        for n in s2.multiplicities:
            d = gcd(m, n)
            ns.update(k for k in range(2, d + 1) if d % k == 0)
    return frozenset(ns)


def signature_pairs(G: FiniteGroup, k2: int, bounds: Bounds, require_free: bool = False):
    lo, hi = kx2_window(k2, require_free)
    if hi <= 0:
        return []
    # K_X^2 = 2 |G| Theta1 Theta2 and Theta >= 1/42 on every hyperbolic orbifold
    theta_cap = hi / (2 * G.order * Fraction(1, 42))
    sigs = candidate_signatures(G, theta_cap, bounds)
    if not sigs:
        return []
    theta_min = min(s.orbifold_euler() for s in sigs)
    theta_cap = hi / (2 * G.order * theta_min)
    sigs = [s for s in sigs if s.orbifold_euler() <= theta_cap]
    pairs = []
    for i, s1 in enumerate(sigs):
        for s2 in sigs[i:]:
            kx2 = 2 * G.order * s1.orbifold_euler() * s2.orbifold_euler()
            if not lo <= kx2 <= hi:
                continue
            # chi = 1: e(S') = 12 - k2 = K_X^2 / 2 + basket excess
            if basket_feasible(12 - k2 - kx2 / 2, kx2 - k2, _stabilizer_orders(s1, s2)):
                pairs.append((s1, s2))
    return pairs


# Per-task work -------------------------------------------------------------------

@dataclass
class Family:
    """One family: an Aut(G)-orbit of pairs of (braid + conjugation) orbits."""

    V1: GeneratingVector
    V2: GeneratingVector
    invariants: object
    size: int


def families(G: FiniteGroup, s1: Signature, s2: Signature, swap: bool = False):
    """Families of the pair of signatures with one representative each.

    Returns (list of Family, aut_available).  Without Aut(G) every pair of
    braid orbits is its own entry.
    """
    if not enumerate_generating_vectors(G, s1) or not enumerate_generating_vectors(G, s2):
        return [], True
    bo1 = braid_orbits(G, s1)
    bo2 = braid_orbits(G, s2)
    pairs = [(a, b) for a in range(len(bo1.reps)) for b in range(len(bo2.reps))]
    aut_gens = automorphism_generators(G)
    if aut_gens is None:
        orbits = [[p] for p in pairs]
    else:
        orbits = family_orbits(G, bo1, bo2, pairs, swap and s1 == s2, aut_gens)
    out = []
    for orb in orbits:
        a, b = orb[0]
        V = GeneratingVector(G, s1, (), bo1.reps[a])
        W = GeneratingVector(G, s2, (), bo2.reps[b])
        out.append(Family(V, W, None, len(orb)))
    return out, aut_gens is not None


def _flags(inv) -> frozenset:
    flags = set()
    if inv.free:
        flags.add("free")
    elif all(is_rdp(t) for t in inv.basket):
        flags.add("rdp-only")
    if inv.ks2 <= 0 or any(not is_rdp(t) for t in inv.basket):
        flags.add("minimality-unverified")
    return frozenset(flags)


def _group_label(G: FiniteGroup) -> tuple:
    order, index = G.label
    return (order, index, G.name or f"G({order},{index})")


def classify_task(G: FiniteGroup, s1: Signature, s2: Signature, k2: int,
                  require_free: bool, swap: bool = False) -> list[ClassificationRecord]:
    """Records of one (group, signature pair) task.

    N counts ordered pairs of orbits; with ``swap`` the two factors of an
    equal-signature pair may be exchanged, which can merge families.
    """
    fams, have_aut = families(G, s1, s2, swap)
    found: dict = {}
    for fam in fams:
        try:
            inv = surface_invariants(fam.V1, fam.V2)
        except InconsistentInvariants:
            continue
        if inv.chi != 1 or inv.ks2 != k2:
            continue
        if require_free and not inv.free:
            continue
        if inv.free != (inv.ks2 == 8):
            raise AssertionError(f"K^2 = 8 without a free action in {G!r} {s1} {s2}")
        h1 = abelianization(pi1_presentation(G, fam.V1, fam.V2))
        key = (str(inv.basket), str(h1))
        entry = found.setdefault(key, [0, _flags(inv)])
        entry[0] += 1
    out = []
    for (basket, h1), (count, flags) in found.items():
        out.append(ClassificationRecord(k2, basket, str(s1), str(s2), _group_label(G),
                                        count if have_aut else None, h1, flags))
    return out


def _run_task(args):
    catalog_path, label, s1, s2, k2, require_free = args
    G = _worker_catalog(catalog_path).get(*label)
    return classify_task(G, Signature.parse(s1), Signature.parse(s2), k2, require_free)


_CATALOGS: dict = {}


def _worker_catalog(path):
    cat = _CATALOGS.get(path)
    if cat is None:
        cat = _CATALOGS[path] = load_catalog(path)
    return cat


def classify(k2: int, catalog: GroupCatalog | None = None, bounds: Bounds = Bounds(),
             require_free: bool = False, jobs: int = 1, catalog_path=None,
             progress=None) -> list[ClassificationRecord]:
    """All records with K_S'^2 = k2 and chi = 1 over the catalog, sorted."""
    if not 1 <= k2 <= 8:
        raise ValueError("k2 must lie in [1, 8]")
    if catalog is None:
        catalog = load_catalog(catalog_path)
    tasks = []
    for G in catalog:
        if bounds.max_order is not None and G.order > bounds.max_order:
            continue
        if G.order == 1:
            continue  # no curve of genus >= 2 has a trivial-group signature here
        for s1, s2 in signature_pairs(G, k2, bounds, require_free):
            tasks.append((G, s1, s2))
    records: list = []
    if jobs > 1 and len(tasks) > 1:
        if catalog_path is None:
            raise ValueError("parallel runs need the catalog path so workers can load it")
        args = [(os.fspath(catalog_path), G.label, str(s1), str(s2), k2, require_free)
                for G, s1, s2 in tasks]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for res in ex.map(_run_task, args, chunksize=1):
                records += res
                if progress:
                    progress(1)
    else:
        for G, s1, s2 in tasks:
            records += classify_task(G, s1, s2, k2, require_free)
            if progress:
                progress(1)
    return sorted(records, key=ClassificationRecord.sort_key)
