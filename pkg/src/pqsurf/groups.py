"""Finite permutation groups with full element tables.

Elements are addressed by their index in ``FiniteGroup.elements``; index 0 is
always the identity.  Products follow the left-to-right convention
``x^(gh) = (x^g)^h``, so ``g * h`` means "apply g, then h".
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

Permutation = tuple  # 0-based images; the catalog text format is 1-based


class CatalogError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def perm_mul(p: Permutation, q: Permutation) -> Permutation:
    return tuple(q[i] for i in p)


def perm_inv(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def is_bijection(images: Sequence[int], degree: int) -> bool:
    return len(images) == degree and sorted(images) == list(range(degree))


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by permutation generators.

    All tables are computed once at construction and never mutated, so
    instances can be shared freely between threads and processes.
    """

    order: int
    degree: int
    generators: tuple  # tuple of Permutation
    elements: tuple  # tuple of Permutation, identity first
    label: tuple = (0, 0)
    name: str = ""
    mul: tuple = field(repr=False, default=())
    inv: tuple = field(repr=False, default=())
    orders: tuple = field(repr=False, default=())
    index: dict = field(repr=False, default_factory=dict)
    gen_indices: tuple = field(repr=False, default=())

    @classmethod
    def from_generators(
        cls,
        generators: Iterable[Sequence[int]],
        degree: int,
        label: tuple = (0, 0),
        name: str = "",
        max_order: int | None = None,
    ) -> "FiniteGroup":
        gens = [tuple(g) for g in generators]
        for g in gens:
            if not is_bijection(g, degree):
                raise CatalogError(f"generator {g} is not a permutation of degree {degree}")
        identity = tuple(range(degree))
        elements = [identity]
        index = {identity: 0}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = perm_mul(x, g)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    if max_order is not None and len(elements) > max_order:
                        raise CatalogError(
                            f"closure exceeds declared order {max_order}")
                    queue.append(y)
        n = len(elements)
        mul = _multiplication_table(elements, index)
        inv = tuple(index[perm_inv(e)] for e in elements)
        orders = tuple(_element_order_from_table(mul, i) for i in range(n))
        return cls(
            order=n,
            degree=degree,
            generators=tuple(gens),
            elements=tuple(elements),
            label=tuple(label),
            name=name,
            mul=mul,
            inv=inv,
            orders=orders,
            index=index,
            gen_indices=tuple(index[g] for g in gens),
        )

    @property
    def identity(self) -> int:
        return 0

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.display_name()}, order={self.order})"

    def display_name(self) -> str:
        base = f"G({self.label[0]},{self.label[1]})"
        return f"{self.name} {base}" if self.name else base

    def element_index(self, p: Sequence[int]) -> int:
        try:
            return self.index[tuple(p)]
        except KeyError:
            raise ValueError(f"{tuple(p)} is not an element of {self!r}") from None

    def product(self, items: Iterable[int]) -> int:
        r = 0
        mul = self.mul
        for x in items:
            r = mul[r][x]
        return r

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv[g], -k
        r = 0
        for _ in range(k % self.orders[g]):
            r = self.mul[r][g]
        return r

    def conj(self, g: int, x: int) -> int:
        """Return g x g^-1."""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def is_abelian(self) -> bool:
        m = self.mul
        return all(m[a][b] == m[b][a] for a in self.gen_indices for b in self.gen_indices)

    def exponent_orders(self) -> list[int]:
        """Distinct element orders, ascending."""
        return sorted(set(self.orders))

    @property
    def _cache(self) -> dict:
        # Lazily computed derived data; populated deterministically, so
        # concurrent readers see identical values.
        c = self.__dict__.get("_derived")
        if c is None:
            c = {}
            object.__setattr__(self, "_derived", c)
        return c


def _multiplication_table(elements: list, index: dict) -> tuple:
    # Column j of row i is index of elements[i] * elements[j].
    rows = []
    for p in elements:
        rows.append(tuple(index[tuple(q[k] for k in p)] for q in elements))
    return tuple(rows)


def _element_order_from_table(mul: tuple, g: int) -> int:
    k, x = 1, g
    while x != 0:
        x = mul[x][g]
        k += 1
    return k


def element_order(G: FiniteGroup, g) -> int:
    """Order of ``g``, given as an element index or a permutation."""
    if not isinstance(g, int):
        g = G.element_index(g)
    if not 0 <= g < G.order:
        raise ValueError(f"element index {g} out of range for {G!r}")
    return G.orders[g]


def subgroup_generated(G: FiniteGroup, S: Iterable[int]) -> frozenset:
    gens = sorted(set(S))
    seen = {0}
    queue = deque([0])
    mul = G.mul
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul[x][g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def conjugacy_classes(G: FiniteGroup) -> list[tuple[int, ...]]:
    """Conjugacy classes as sorted tuples; the class of the identity comes first."""
    cache = G._cache
    if "classes" in cache:
        return cache["classes"]
    assigned = [-1] * G.order
    conjugator = [0] * G.order
    classes = []
    for x in range(G.order):
        if assigned[x] >= 0:
            continue
        cid = len(classes)
        assigned[x] = cid
        conjugator[x] = 0
        orbit = [x]
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g in G.gen_indices:
                z = G.conj(g, y)
                if assigned[z] < 0:
                    assigned[z] = cid
                    conjugator[z] = G.mul[g][conjugator[y]]
                    orbit.append(z)
                    queue.append(z)
        classes.append(tuple(sorted(orbit)))
    cache["classes"] = classes
    cache["class_of"] = tuple(assigned)
    # conjugator[z] = c with c * rep * c^-1 = z
    cache["conjugator"] = tuple(conjugator)
    return classes


def class_of(G: FiniteGroup) -> tuple:
    conjugacy_classes(G)
    return G._cache["class_of"]


def class_conjugators(G: FiniteGroup) -> tuple:
    conjugacy_classes(G)
    return G._cache["conjugator"]


# Automorphisms ---------------------------------------------------------

DEFAULT_AUT_BOUND = 384


def _small_generating_set(G: FiniteGroup) -> list[int]:
    """A short generating tuple whose elements lie in rare order-classes.

    Automorphism search cost is the product of the number of candidate
    images, i.e. of elements of equal order, so we greedily minimise it.
    """
    if G.order == 1:
        return []
    by_order: dict[int, int] = {}
    for o in G.orders:
        by_order[o] = by_order.get(o, 0) + 1
    reps = [c[0] for c in conjugacy_classes(G)[1:]]
    reps.sort(key=lambda x: (by_order[G.orders[x]], x))
    gens: list[int] = []
    current = frozenset([0])
    while len(current) < G.order:
        best = None
        for x in (reps if not gens else range(1, G.order)):
            if x in current:
                continue
            size = len(subgroup_generated(G, gens + [x]))
            key = (-size, by_order[G.orders[x]], x)
            if best is None or key < best[0]:
                best = (key, x)
            if size == G.order and by_order[G.orders[x]] == min(by_order.values()):
                break
        gens.append(best[1])
        current = subgroup_generated(G, gens)
    return gens


def _extend_hom(G: FiniteGroup, gens: list[int], images: list[int]):
    """Extend gens -> images to <gens>; None if not a well-defined injective map."""
    mul = G.mul
    image = {0: 0}
    queue = deque([0])
    used = {0}
    while queue:
        x = queue.popleft()
        fx = image[x]
        for g, h in zip(gens, images):
            y = mul[x][g]
            fy = mul[fx][h]
            prev = image.get(y)
            if prev is None:
                if fy in used:
                    return None
                image[y] = fy
                used.add(fy)
                queue.append(y)
            elif prev != fy:
                return None
    return image


def automorphisms(G: FiniteGroup, bound: int = DEFAULT_AUT_BOUND):
    """All automorphisms of G as tuples mapping element index -> index.

    Returns None (not computed) when ``G.order`` exceeds ``bound``; the
    list is never silently truncated.  The identity map is listed first.
    """
    if G.order > bound:
        return None
    cache = G._cache
    if "aut" in cache:
        return cache["aut"]
    gens = _small_generating_set(G)
    candidates = []
    for g in gens:
        candidates.append([x for x in range(G.order) if G.orders[x] == G.orders[g]])
    # Orders of pairwise products are preserved; cheap pre-filter.
    mul, orders = G.mul, G.orders
    result = []

    def search(k: int, images: list[int]):
        if k == len(gens):
            hom = _extend_hom(G, gens, images)
            if hom is not None and len(hom) == G.order:
                result.append(tuple(hom[x] for x in range(G.order)))
            return
        g = gens[k]
        for h in candidates[k]:
            ok = True
            for gi, hi in zip(gens[:k], images):
                if orders[mul[gi][g]] != orders[mul[hi][h]] or \
                        orders[mul[gi][G.inv[g]]] != orders[mul[hi][G.inv[h]]]:
                    ok = False
                    break
            if not ok:
                continue
            images.append(h)
            if _extend_hom(G, gens[: k + 1], images) is not None:
                search(k + 1, images)
            images.pop()

    search(0, [])
    identity = tuple(range(G.order))
    result.sort(key=lambda a: (a != identity, a))
    cache["aut"] = result
    return result


def automorphism_generators(G: FiniteGroup, bound: int = DEFAULT_AUT_BOUND):
    """A small generating set of Aut(G), or None if Aut(G) was not computed."""
    cache = G._cache
    if "aut_gens" in cache:
        return cache["aut_gens"]
    auts = automorphisms(G, bound)
    if auts is None:
        return None
    n = len(auts)
    lookup = {a: i for i, a in enumerate(auts)}
    gens: list[tuple] = []
    reached = {tuple(range(G.order))}
    for a in auts:
        if a in reached:
            continue
        gens.append(a)
        # closure under composition with the chosen generators
        queue = deque(reached)
        while queue:
            x = queue.popleft()
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in reached:
                    reached.add(y)
                    queue.append(y)
        if len(reached) == n:
            break
    assert len(reached) == n and all(r in lookup for r in reached)
    cache["aut_gens"] = gens
    return gens


# Catalog -----------------------------------------------------------------

_HEADER = re.compile(r"^group\s+(\d+)\s+(\d+)\s+(\d+)(?:\s+(.*))?$")


@dataclass(frozen=True)
class GroupCatalog:
    groups: dict  # order -> list of FiniteGroup, sorted by catalog index

    def __iter__(self):
        for order in sorted(self.groups):
            yield from self.groups[order]

    def __len__(self) -> int:
        return sum(len(v) for v in self.groups.values())

    def get(self, order: int, index: int) -> FiniteGroup:
        for G in self.groups.get(order, []):
            if G.label == (order, index):
                return G
        raise KeyError(f"G({order},{index}) not in catalog")

    def find(self, key: str) -> FiniteGroup:
        """Look a group up by name ("A5") or label ("60,5" / "G(60,5)")."""
        m = re.fullmatch(r"\s*(?:G\()?(\d+)\s*,\s*(\d+)\)?\s*", key)
        if m:
            return self.get(int(m.group(1)), int(m.group(2)))
        for G in self:
            if G.name == key:
                return G
        raise KeyError(f"group {key!r} not in catalog")

    def restrict(self, keys: Iterable[str]) -> "GroupCatalog":
        picked: dict = {}
        for key in keys:
            G = self.find(key)
            picked.setdefault(G.order, [])
            if G not in picked[G.order]:
                picked[G.order].append(G)
        for v in picked.values():
            v.sort(key=lambda G: G.label)
        return GroupCatalog(picked)


def parse_catalog(text: str) -> GroupCatalog:
    groups: dict = {}
    seen = set()
    header = None
    gens: list = []
    header_line = 0

    def finish(lineno):
        order, idx, degree, name = header
        G = FiniteGroup.from_generators(
            gens, degree, label=(order, idx), name=name, max_order=order)
        if G.order != order:
            raise CatalogError(
                f"generators of G({order},{idx}) generate a group of order {G.order}",
                header_line)
        groups.setdefault(order, []).append(G)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            m = _HEADER.match(line)
            if not m:
                raise CatalogError(f"expected 'group' header, got {line!r}", lineno)
            order, idx, degree = int(m.group(1)), int(m.group(2)), int(m.group(3))
            if order < 1 or degree < 1:
                raise CatalogError("order and degree must be positive", lineno)
            if (order, idx) in seen:
                raise CatalogError(f"duplicate label G({order},{idx})", lineno)
            seen.add((order, idx))
            header = (order, idx, degree, (m.group(4) or "").strip())
            header_line = lineno
            gens = []
        elif line == "end":
            try:
                finish(lineno)
            except CatalogError as e:
                if e.line is None:
                    raise CatalogError(str(e), header_line) from None
                raise
            header = None
        elif line.startswith("perm"):
            parts = line.split()[1:]
            try:
                images = [int(p) - 1 for p in parts]
            except ValueError:
                raise CatalogError(f"non-integer in {line!r}", lineno) from None
            degree = header[2]
            if not is_bijection(images, degree):
                raise CatalogError(f"generator is not a bijection on 1..{degree}", lineno)
            gens.append(tuple(images))
        else:
            raise CatalogError(f"unexpected line {line!r}", lineno)
    if header is not None:
        raise CatalogError("missing 'end' for last group", header_line)
    for v in groups.values():
        v.sort(key=lambda G: G.label)
    return GroupCatalog(groups)


def load_catalog(path=None) -> GroupCatalog:
    """Load a catalog file; the shipped catalog when ``path`` is None."""
    if path is None:
        path = Path(__file__).with_name("data") / "groups.cat"
    return parse_catalog(Path(path).read_text(encoding="utf-8"))


def format_group(G: FiniteGroup) -> str:
    lines = [f"group {G.label[0]} {G.label[1]} {G.degree} {G.name}".rstrip()]
    for g in G.generators:
        lines.append("perm " + " ".join(str(i + 1) for i in g))
    lines.append("end")
    return "\n".join(lines)
