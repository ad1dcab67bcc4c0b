"""Signatures, generating vectors and braid-move orbits."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .groups import (
    FiniteGroup,
    automorphism_generators,
    class_conjugators,
    conjugacy_classes,
)


@dataclass(frozen=True, order=True)
class Signature:
    genus: int
    multiplicities: tuple

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus of the base must be nonnegative")
        ms = tuple(sorted(int(m) for m in self.multiplicities))
        if any(m < 2 for m in ms):
            raise ValueError(f"multiplicities must be >= 2, got {ms}")
        object.__setattr__(self, "multiplicities", ms)

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse ``g';m1,m2,...``; ``m^k`` repeats m k times, ``;`` part optional."""
        text = text.strip()
        if ";" in text:
            g, rest = text.split(";", 1)
            genus = int(g)
        else:
            genus, rest = 0, text
        ms: list[int] = []
        for tok in filter(None, (t.strip() for t in rest.split(","))):
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
            if not m:
                raise ValueError(f"bad multiplicity token {tok!r}")
            ms += [int(m.group(1))] * int(m.group(2) or 1)
        return cls(genus, tuple(ms))

    def __str__(self) -> str:
        return f"{self.genus};" + ",".join(map(str, self.multiplicities))

    def short(self) -> str:
        """Exponent shorthand as printed in the tables, e.g. ``2,5^2``."""
        out = []
        for m in sorted(set(self.multiplicities)):
            k = self.multiplicities.count(m)
            out.append(f"{m}^{k}" if k > 1 else str(m))
        body = ",".join(out)
        return body if self.genus == 0 else f"{self.genus};{body}"

    @property
    def r(self) -> int:
        return len(self.multiplicities)

    def orbifold_euler(self) -> Fraction:
        """-2 + 2g' + sum(1 - 1/m_i); positive iff the orbifold is hyperbolic."""
        return 2 * self.genus - 2 + sum((1 - Fraction(1, m) for m in self.multiplicities),
                                        Fraction(0))


def rh_genus(group_order: int, sig: Signature):
    """Genus g of a G-cover with the given signature, or None if non-integral.

    The result may be < 2; callers that need curves of general type filter it.
    """
    rhs = group_order * sig.orbifold_euler()
    two_g = rhs + 2
    if two_g.denominator != 1 or two_g.numerator % 2:
        return None
    return two_g.numerator // 2


@dataclass(frozen=True, eq=False)
class GeneratingVector:
    """Images (a_1, b_1, ..., a_g', b_g'; gamma_1, ..., gamma_r) of an appropriate
    surjection T(g'; m_1..m_r) -> G, as element indices."""

    group: FiniteGroup
    signature: Signature
    hyperbolic_part: tuple
    branch_part: tuple

    @property
    def elements(self) -> tuple:
        return self.hyperbolic_part + self.branch_part

    def key(self) -> tuple:
        return self.hyperbolic_part + self.branch_part

    def __eq__(self, other):
        return (isinstance(other, GeneratingVector) and self.group is other.group
                and self.signature == other.signature and self.key() == other.key())

    def __hash__(self):
        return hash((self.signature, self.key()))

    def __repr__(self):
        return f"GeneratingVector({self.signature}, {self.hyperbolic_part}, {self.branch_part})"

    def conjugate(self, g: int) -> "GeneratingVector":
        c = self.group.conj
        return GeneratingVector(self.group, self.signature,
                                tuple(c(g, x) for x in self.hyperbolic_part),
                                tuple(c(g, x) for x in self.branch_part))

    def apply(self, aut: Sequence[int]) -> "GeneratingVector":
        return GeneratingVector(self.group, self.signature,
                                tuple(aut[x] for x in self.hyperbolic_part),
                                tuple(aut[x] for x in self.branch_part))


def long_relation(G: FiniteGroup, hyperbolic: Sequence[int], branch: Sequence[int]) -> int:
    """prod [a_i, b_i] * gamma_1 ... gamma_r with [a, b] = a b a^-1 b^-1."""
    mul, inv = G.mul, G.inv
    r = 0
    for i in range(0, len(hyperbolic), 2):
        a, b = hyperbolic[i], hyperbolic[i + 1]
        r = mul[mul[mul[mul[r][a]][b]][inv[a]]][inv[b]]
    for x in branch:
        r = mul[r][x]
    return r


def is_generating_vector(G: FiniteGroup, sig: Signature, hyperbolic, branch) -> bool:
    from .groups import subgroup_generated
    if len(hyperbolic) != 2 * sig.genus or len(branch) != sig.r:
        return False
    if any(G.orders[x] != m for x, m in zip(branch, sig.multiplicities)):
        return False
    if long_relation(G, hyperbolic, branch) != 0:
        return False
    return len(subgroup_generated(G, tuple(hyperbolic) + tuple(branch))) == G.order


class _SubgroupJoin:
    """Memoised subgroup joins <H, x>, subgroups encoded as bitmasks."""

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.memo: dict = {}
        self.gens = {1: ()}

    def join(self, mask: int, x: int) -> int:
        if (mask >> x) & 1:
            return mask
        key = (mask, x)
        got = self.memo.get(key)
        if got is not None:
            return got
        gens = self.gens[mask] + (x,)
        mul = self.G.mul
        seen = {0}
        queue = [0]
        for y in queue:
            row = mul[y]
            for g in gens:
                z = row[g]
                if z not in seen:
                    seen.add(z)
                    queue.append(z)
        new = 0
        for z in seen:
            new |= 1 << z
        self.gens.setdefault(new, gens)
        self.memo[key] = new
        return new


def _joiner(G: FiniteGroup) -> _SubgroupJoin:
    j = G._cache.get("joiner")
    if j is None:
        j = G._cache["joiner"] = _SubgroupJoin(G)
    return j


def enumerate_generating_vectors(G: FiniteGroup, sig: Signature) -> list[GeneratingVector]:
    """All appropriate generating vectors of G for ``sig``, sorted by element indices."""
    cache = G._cache.setdefault("vectors", {})
    if sig in cache:
        return cache[sig]
    keys = sorted(_search(G, sig))
    h = 2 * sig.genus
    result = [GeneratingVector(G, sig, k[:h], k[h:]) for k in keys]
    cache[sig] = result
    return result


def _search(G: FiniteGroup, sig: Signature) -> list[tuple]:
    n = G.order
    full = (1 << n) - 1
    ms = sig.multiplicities
    r = len(ms)
    mul, inv, orders = G.mul, G.inv, G.orders
    if any(m not in set(orders) for m in ms):
        return []
    join = _joiner(G).join
    of_order: dict = {}
    for x in range(n):
        of_order.setdefault(orders[x], []).append(x)

    found: list[tuple] = []

    if sig.genus == 0:
        if r == 0:
            return [()] if n == 1 else []
        if r == 1:
            return []  # a single branch point would need gamma_1 = 1 of order m >= 2
        # gamma_1 runs over class representatives; the other vectors are
        # recovered by conjugation below.
        reps = [c[0] for c in conjugacy_classes(G) if orders[c[0]] == ms[0]]
        last = ms[-1]
        prefix = [0] * (r - 1)

        def rec(depth: int, prod: int, mask: int):
            if depth == r - 1:
                g_last = inv[prod]
                if orders[g_last] == last and join(mask, g_last) == full:
                    found.append(tuple(prefix) + (g_last,))
                return
            row = mul[prod]
            for x in of_order[ms[depth]]:
                prefix[depth] = x
                rec(depth + 1, row[x], join(mask, x))

        for x in reps:
            prefix[0] = x
            rec(1, x, join(1, x))
        conjugators = class_conjugators(G)
        classes = conjugacy_classes(G)
        expanded = []
        for vec in found:
            cls = next(c for c in classes if c[0] == vec[0])
            for y in cls:
                c = conjugators[y]
                expanded.append(tuple(G.conj(c, z) for z in vec))
        return expanded

    # Positive base genus: plain backtracking over the hyperbolic part.
    h = 2 * sig.genus
    slot_sets = [range(n)] * h + [of_order[m] for m in ms]
    vec = [0] * (h + r)

    def commutator_prefix(k: int) -> int:
        return long_relation(G, vec[:k], ())

    def rec_g(depth: int, mask: int):
        if depth == h + r - (1 if r else 0):
            if r:
                p = long_relation(G, vec[:h], vec[h:h + r - 1])
                g_last = inv[p]
                if orders[g_last] == ms[-1] and join(mask, g_last) == full:
                    found.append(tuple(vec[:h + r - 1]) + (g_last,))
            else:
                if commutator_prefix(h) == 0 and mask == full:
                    found.append(tuple(vec))
            return
        for x in slot_sets[depth]:
            vec[depth] = x
            rec_g(depth + 1, join(mask, x))

    rec_g(0, 1)
    return found


def stabilizer_set(V: GeneratingVector) -> frozenset:
    """Union of all conjugates of all powers of the branch elements."""
    G = V.group
    out = {0}
    for x in V.branch_part:
        p = x
        while p != 0:
            out.add(p)
            p = G.mul[p][x]
    classes = conjugacy_classes(G)
    from .groups import class_of
    cls = class_of(G)
    result = set()
    for y in out:
        result.update(classes[cls[y]])
    return frozenset(result)


# Braid moves -------------------------------------------------------------

def braid_move(G: FiniteGroup, branch: tuple, i: int, inverse: bool = False) -> tuple:
    """sigma_i: (.., g_i, g_i+1, ..) -> (.., g_i g_i+1 g_i^-1, g_i, ..); inverse
    sends it to (.., g_i+1, g_i+1^-1 g_i g_i+1, ..)."""
    a, b = branch[i], branch[i + 1]
    if not inverse:
        new = (G.conj(a, b), a)
    else:
        new = (b, G.conj(G.inv[b], a))
    return branch[:i] + new + branch[i + 2:]


class BraidOrbits:
    """Braid orbits of genus-0 generating vectors of one signature.

    Moves reorder the multiplicities, so the search walks through every
    ordering and only records tuples in canonical (sorted) order.  With
    ``conjugate`` (the default) the orbits are also closed under
    simultaneous conjugation: conjugating one factor's vector by g is
    undone by the map (x, y) -> (x, g^-1 y), so both give the same surface.
    """

    def __init__(self, G: FiniteGroup, sig: Signature, conjugate: bool = True):
        if sig.genus != 0:
            raise ValueError("braid moves are only implemented for genus-0 bases")
        self.G = G
        self.sig = sig
        self.conjugate = conjugate
        self.orbit_of: dict = {}
        self.reps: list = []

    def orbit_id(self, branch: tuple) -> int:
        got = self.orbit_of.get(branch)
        if got is not None:
            return got
        oid = len(self.reps)
        G = self.G
        r = len(branch)
        ms = self.sig.multiplicities
        seen = {branch}
        queue = deque([branch])
        members = []
        mul, inv, orders = G.mul, G.inv, G.orders
        ms = tuple(ms)
        conj_rows = ([(mul[g], inv[g]) for g in G.gen_indices] if self.conjugate else [])
        while queue:
            t = queue.popleft()
            if tuple(orders[x] for x in t) == ms:
                members.append(t)
            for i in range(r - 1):
                a, b = t[i], t[i + 1]
                ia, ib = inv[a], inv[b]
                # sigma_i and its inverse, as in braid_move
                for u in (t[:i] + (mul[mul[a][b]][ia], a) + t[i + 2:],
                          t[:i] + (b, mul[mul[ib][a]][b]) + t[i + 2:]):
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
            for row, gi in conj_rows:
                u = tuple(mul[row[x]][gi] for x in t)
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        for t in members:
            self.orbit_of[t] = oid
        self.reps.append(min(members))
        return oid


def braid_orbits(G: FiniteGroup, sig: Signature) -> BraidOrbits:
    """Cached braid + conjugation orbits covering every vector of ``sig``."""
    cache = G._cache.setdefault("braid_orbits", {})
    bo = cache.get(sig)
    if bo is None:
        bo = BraidOrbits(G, sig)
        for v in enumerate_generating_vectors(G, sig):
            bo.orbit_id(v.branch_part)
        cache[sig] = bo
    return bo


def braid_orbit_partition(G: FiniteGroup, sig: Signature, vectors=None) -> tuple[BraidOrbits, list[int]]:
    if vectors is None:
        vectors = enumerate_generating_vectors(G, sig)
    bo = BraidOrbits(G, sig)
    ids = [bo.orbit_id(v.branch_part) for v in vectors]
    return bo, ids


def family_orbits(G: FiniteGroup, bo1: BraidOrbits, bo2: BraidOrbits, pairs: Iterable[tuple],
                  swap_allowed: bool, aut_gens=None):
    """Orbits of (braid-orbit, braid-orbit) pairs under diagonal Aut(G) and swap.

    ``pairs`` are (orbit id in bo1, orbit id in bo2).  Returns a list of
    orbits (each a sorted list of pairs) or None when Aut(G) is unavailable.
    The pair set must be stable under the group action; pairs reached by an
    automorphism but missing from ``pairs`` are added.
    """
    if aut_gens is None:
        aut_gens = automorphism_generators(G)
        if aut_gens is None:
            return None
    index: dict = {}
    items: list = []
    uf_parent: list = []

    def node(p):
        k = index.get(p)
        if k is None:
            k = index[p] = len(items)
            items.append(p)
            uf_parent.append(k)
        return k

    def find(x):
        while uf_parent[x] != x:
            uf_parent[x] = uf_parent[uf_parent[x]]
            x = uf_parent[x]
        return x

    def union(a, b):
        a, b = find(a), find(b)
        if a != b:
            uf_parent[max(a, b)] = min(a, b)

    for p in pairs:
        node(p)
    amap1: dict = {}
    amap2: dict = {}

    def image(bo, amap, k, oid):
        key = (k, oid)
        got = amap.get(key)
        if got is None:
            a = aut_gens[k]
            got = amap[key] = bo.orbit_id(tuple(a[x] for x in bo.reps[oid]))
        return got

    i = 0
    while i < len(items):
        o1, o2 = items[i]
        for k in range(len(aut_gens)):
            q = (image(bo1, amap1, k, o1), image(bo2, amap2, k, o2))
            union(i, node(q))
        if swap_allowed:
            # bo1 and bo2 describe the same signature; map ids across
            q = (bo1.orbit_id(bo2.reps[o2]), bo2.orbit_id(bo1.reps[o1]))
            union(i, node(q))
        i += 1
    groups: dict = {}
    for k, p in enumerate(items):
        groups.setdefault(find(k), []).append(p)
    return sorted((sorted(v) for v in groups.values()), key=lambda v: v[0])


def hurwitz_orbits(pairs: Sequence[tuple], G: FiniteGroup, swap_allowed: bool):
    """Orbits of (V1, V2) generating-vector pairs under simultaneous Aut(G),
    braid moves and inner automorphisms on each vector separately, and
    (optionally) exchange of the factors.

    Returns a list of orbits, each a list of indices into ``pairs``, or None
    when Aut(G) could not be computed.  Orbits are computed in the full
    space, so pairs that are equivalent only through a pair outside the list
    still land in the same orbit.
    """
    if not pairs:
        return []
    sig1, sig2 = pairs[0][0].signature, pairs[0][1].signature
    if swap_allowed and sig1 != sig2:
        raise ValueError("swap_allowed requires equal signatures")
    bo1 = BraidOrbits(G, sig1)
    bo2 = bo1 if swap_allowed else BraidOrbits(G, sig2)
    keys = [(bo1.orbit_id(v1.branch_part), bo2.orbit_id(v2.branch_part)) for v1, v2 in pairs]
    orbits = family_orbits(G, bo1, bo2, keys, swap_allowed)
    if orbits is None:
        return None
    where = {}
    for n, orb in enumerate(orbits):
        for p in orb:
            where[p] = n
    grouped: dict = {}
    for idx, k in enumerate(keys):
        grouped.setdefault(where[k], []).append(idx)
    return [grouped[n] for n in sorted(grouped)]
