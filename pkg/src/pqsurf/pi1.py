"""Fundamental groups of (C1 x C2)/G and their abelianizations.

Words are tuples of nonzero integers: ``k + 1`` is generator k, ``-(k + 1)``
its inverse.  pi_1 of the quotient is H / Tors(H), where H is the preimage
of the diagonal of G x G in T1 x T2 (an index-|G| subgroup).  H is presented
by Reidemeister-Schreier on the explicit coset action, and Tors(H) is
normally generated by the stabilizers of one point in each fixed-point orbit.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

from .geometry import fixed_point_orbits
from .groups import FiniteGroup
from .orbifold import GeneratingVector, Signature


# Presentations -----------------------------------------------------------

def free_reduce(word) -> tuple:
    out: list = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word) -> tuple:
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def invert(word) -> tuple:
    return tuple(-x for x in reversed(word))


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple = ()
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        rels = tuple(tuple(r) for r in self.relators)
        for r in rels:
            for x in r:
                if x == 0 or abs(x) > self.generator_count:
                    raise ValueError(f"letter {x} out of range for {self.generator_count} generators")
        object.__setattr__(self, "relators", rels)
        if self.names and len(self.names) != self.generator_count:
            raise ValueError("one name per generator expected")

    def name(self, k: int) -> str:
        return self.names[k] if self.names else f"x{k + 1}"

    def format_word(self, word) -> str:
        if not word:
            return "1"
        return " ".join(self.name(abs(x) - 1) + ("^-1" if x < 0 else "") for x in word)

    def size(self) -> tuple[int, int, int]:
        """(generators, relators, total relator length)."""
        return self.generator_count, len(self.relators), sum(map(len, self.relators))

    def with_relators(self, extra) -> "Presentation":
        return Presentation(self.generator_count, self.relators + tuple(map(tuple, extra)), self.names)


def orbifold_presentation(sig: Signature) -> Presentation:
    """T(g'; m_1..m_r) on a_1, b_1, .., a_g', b_g', c_1, .., c_r."""
    g = sig.genus
    names = []
    for i in range(1, g + 1):
        names += [f"a{i}", f"b{i}"]
    names += [f"c{j}" for j in range(1, sig.r + 1)]
    rels = []
    for j, m in enumerate(sig.multiplicities):
        rels.append((2 * g + j + 1,) * m)
    long = []
    for i in range(g):
        a, b = 2 * i + 1, 2 * i + 2
        long += [a, b, -a, -b]
    long += [2 * g + j + 1 for j in range(sig.r)]
    if long:
        rels.append(tuple(long))
    return Presentation(len(names), tuple(rels), tuple(names))


def product_presentation(P: Presentation, Q: Presentation, prefixes=("", "")) -> Presentation:
    """Direct product: both relator sets plus commutators between the factors."""
    n = P.generator_count
    shifted = tuple(tuple(x + n if x > 0 else x - n for x in r) for r in Q.relators)
    comms = tuple((i, j + n, -i, -(j + n))
                  for i in range(1, n + 1) for j in range(1, Q.generator_count + 1))
    names = tuple(prefixes[0] + P.name(k) for k in range(n)) + tuple(
        prefixes[1] + Q.name(k) for k in range(Q.generator_count))
    return Presentation(n + Q.generator_count, P.relators + shifted + comms, names)


# Reidemeister-Schreier -----------------------------------------------------

class SchreierRewriter:
    """Subgroup presentation for the stabilizer of coset 0 under a transitive
    right action ``action[k][c]`` of the generators on cosets."""

    def __init__(self, P: Presentation, action):
        self.P = P
        self.action = [list(a) for a in action]
        if len(self.action) != P.generator_count:
            raise ValueError("one permutation per generator expected")
        n = len(self.action[0]) if self.action else 1
        self.index = n
        self.inverse = []
        for a in self.action:
            inv = [0] * n
            for c, d in enumerate(a):
                inv[d] = c
            self.inverse.append(inv)
        # BFS spanning tree; letters tried in the order x1, .., xn, x1^-1, ..
        self.word_to = [None] * n
        self.word_to[0] = ()
        tree = set()
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for k in range(P.generator_count):
                d = self.action[k][c]
                if self.word_to[d] is None:
                    self.word_to[d] = self.word_to[c] + (k + 1,)
                    tree.add((c, k))
                    queue.append(d)
            for k in range(P.generator_count):
                d = self.inverse[k][c]
                if self.word_to[d] is None:
                    self.word_to[d] = self.word_to[c] + (-(k + 1),)
                    tree.add((d, k))
                    queue.append(d)
        if any(w is None for w in self.word_to):
            raise ValueError("coset action is not transitive")
        self.sgen: dict = {}
        names = []
        for c in range(n):
            for k in range(P.generator_count):
                if (c, k) not in tree:
                    self.sgen[(c, k)] = len(names) + 1
                    names.append(f"{P.name(k)}@{c}")
        self.names = tuple(names)

    def trace(self, word, start: int = 0) -> int:
        c = start
        for x in word:
            c = self.action[x - 1][c] if x > 0 else self.inverse[-x - 1][c]
        return c

    def rewrite(self, word, start: int = 0) -> tuple[tuple, int]:
        """Schreier word of t_start * word * t_end^-1 and the end coset."""
        out = []
        c = start
        for x in word:
            if x > 0:
                s = self.sgen.get((c, x - 1))
                if s:
                    out.append(s)
                c = self.action[x - 1][c]
            else:
                k = -x - 1
                c = self.inverse[k][c]
                s = self.sgen.get((c, k))
                if s:
                    out.append(-s)
        return free_reduce(out), c

    def subgroup_word(self, word) -> tuple:
        w, end = self.rewrite(word, 0)
        if end != 0:
            raise ValueError("word does not lie in the subgroup")
        return w

    def presentation(self) -> Presentation:
        rels = []
        seen = set()
        for c in range(self.index):
            for r in self.P.relators:
                w, end = self.rewrite(r, c)
                assert end == c
                w = cyclic_reduce(w)
                if w and w not in seen:
                    seen.add(w)
                    rels.append(w)
        return Presentation(len(self.names), tuple(rels), self.names)


def reidemeister_schreier(P: Presentation, action) -> Presentation:
    return SchreierRewriter(P, action).presentation()


def _vector_images(V: GeneratingVector) -> tuple:
    return tuple(V.hyperbolic_part) + tuple(V.branch_part)


class FiberProduct:
    """H(G; phi1, phi2) inside T1 x T2 with its Schreier data.

    Cosets of H are labelled by G: H(x, y) <-> phi1(x)^-1 phi2(y), so a
    T1-generator with image g sends k to g^-1 k and a T2-generator with
    image h sends k to k h.
    """

    def __init__(self, V1: GeneratingVector, V2: GeneratingVector):
        if V1.group is not V2.group:
            raise ValueError("generating vectors must belong to the same group")
        G = V1.group
        self.G, self.V1, self.V2 = G, V1, V2
        P1 = orbifold_presentation(V1.signature)
        P2 = orbifold_presentation(V2.signature)
        self.n1 = P1.generator_count
        self.ambient = product_presentation(P1, P2, ("", "'"))
        im1, im2 = _vector_images(V1), _vector_images(V2)
        action = [[G.mul[G.inv[g]][k] for k in range(G.order)] for g in im1]
        action += [[G.mul[k][h] for k in range(G.order)] for h in im2]
        self.images2 = im2
        self.rewriter = SchreierRewriter(self.ambient, action)

    def presentation(self) -> Presentation:
        return self.rewriter.presentation()

    def _word_in_second(self, target: int) -> tuple:
        """A word in the T2 generators whose image in G is ``target``."""
        G = self.G
        if not hasattr(self, "_words2"):
            words = {0: ()}
            queue = deque([0])
            while queue:
                x = queue.popleft()
                for k, h in enumerate(self.images2):
                    for y, letter in ((G.mul[x][h], k + 1), (G.mul[x][G.inv[h]], -(k + 1))):
                        if y not in words:
                            words[y] = words[x] + (letter + self.n1 if letter > 0 else letter - self.n1,)
                            queue.append(y)
            self._words2 = words
        return self._words2[target]

    def torsion_words(self) -> list[tuple]:
        """Ambient words (c_i^(m_i/n), w c'_j^t w^-1) for one fixed point per orbit."""
        g1 = self.V1.signature.genus
        g2 = self.V2.signature.genus
        out = []
        for p in fixed_point_orbits(self.V1, self.V2):
            m = self.V1.signature.multiplicities[p.i]
            ci = 2 * g1 + p.i + 1
            cj = self.n1 + 2 * g2 + p.j + 1
            w = self._word_in_second(p.d)
            out.append((ci,) * (m // p.type.n) + w + (cj,) * p.t + invert(w))
        return out

    def torsion_generators(self) -> list[tuple]:
        return [self.rewriter.subgroup_word(w) for w in self.torsion_words()]


def fiber_product_presentation(G: FiniteGroup, V1: GeneratingVector, V2: GeneratingVector) -> Presentation:
    _check_group(G, V1, V2)
    return FiberProduct(V1, V2).presentation()


def torsion_normal_generators(G: FiniteGroup, V1: GeneratingVector, V2: GeneratingVector) -> list[tuple]:
    _check_group(G, V1, V2)
    return FiberProduct(V1, V2).torsion_generators()


def pi1_presentation(G: FiniteGroup, V1: GeneratingVector, V2: GeneratingVector) -> Presentation:
    _check_group(G, V1, V2)
    fp = FiberProduct(V1, V2)
    return fp.presentation().with_relators(fp.torsion_generators())


def _check_group(G, V1, V2):
    if V1.group is not G or V2.group is not G:
        raise ValueError("generating vectors must belong to the given group")


# Smith normal form ---------------------------------------------------------

def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf(A: list[list[int]], m: int, n: int, U=None, V=None) -> list[list[int]]:
    """In-place Smith reduction of the m x n matrix A; U and V (if given)
    receive the same row and column operations."""

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        a, b = A[dst], A[src]
        for k in range(n):
            if b[k]:
                a[k] -= q * b[k]
        if U is not None:
            a, b = U[dst], U[src]
            for k in range(m):
                if b[k]:
                    a[k] -= q * b[k]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
                    dirty = dirty or A[t][j] != 0
            if dirty:
                # bring the smallest leftover of row/column t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    return A


def smith_normal_form(M, ncols: int | None = None):
    """(S, U, V) with U M V = S diagonal, d_1 | d_2 | ..., U and V unimodular."""
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if A else (ncols or 0)
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    U, V = _identity(m), _identity(n)
    _snf(A, m, n, U, V)
    return A, U, V


def invariant_factors(M, ncols: int | None = None) -> list[int]:
    """Diagonal of the Smith form (including zeros up to min(m, n))."""
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if A else (ncols or 0)
    _snf(A, m, n)
    return [A[i][i] for i in range(min(m, n))]


# Abelian groups --------------------------------------------------------------

def _factorize(n: int) -> dict[int, int]:
    out: dict = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianInvariants:
    """Z^free_rank x Z_d1 x ... x Z_dk with d1 | d2 | ... | dk, all d_i >= 2."""

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.free_rank < 0 or any(d < 2 for d in t):
            raise ValueError("torsion coefficients must be >= 2")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"not a divisibility chain: {t}")

    @classmethod
    def from_cyclic_factors(cls, free_rank: int, orders) -> "AbelianInvariants":
        """Normalize an arbitrary product of cyclic groups."""
        powers: dict = {}
        for d in orders:
            if d == 0:
                free_rank += 1
                continue
            for p, e in _factorize(abs(d)).items():
                powers.setdefault(p, []).append(p ** e)
        k = max((len(v) for v in powers.values()), default=0)
        chain = [1] * k
        for v in powers.values():
            v.sort()
            for i, q in enumerate(v):
                chain[k - len(v) + i] *= q
        return cls(free_rank, tuple(d for d in chain if d > 1))

    @classmethod
    def parse(cls, text: str) -> "AbelianInvariants":
        """Accepts ``0``, ``Z^2 x Z_3 x Z_15`` and shorthand like ``Z_2^3 x Z_4``."""
        text = text.strip()
        if text in ("0", "1"):
            return cls()
        rank, orders = 0, []
        for tok in re.split(r"\s*[x×]\s*", text):
            m = re.fullmatch(r"Z(?:\^(\d+))?", tok)
            if m:
                rank += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z_\{?(\d+)\}?(?:\^(\d+))?", tok)
            if not m:
                raise ValueError(f"bad abelian group token {tok!r}")
            orders += [int(m.group(1))] * int(m.group(2) or 1)
        return cls.from_cyclic_factors(rank, orders)

    @property
    def order(self):
        """Order of the group, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z_{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "0"


def _sparse_rows(P: Presentation) -> list[dict]:
    rows = []
    for r in P.relators:
        row: dict = {}
        for x in r:
            k = abs(x) - 1
            row[k] = row.get(k, 0) + (1 if x > 0 else -1)
        row = {k: v for k, v in row.items() if v}
        if row:
            rows.append(row)
    return rows


def relation_matrix(P: Presentation) -> list[list[int]]:
    """Exponent-sum matrix: one row per relator, one column per generator."""
    out = []
    for row in _sparse_rows(P):
        dense = [0] * P.generator_count
        for k, v in row.items():
            dense[k] = v
        out.append(dense)
    return out


def abelianization(P: Presentation) -> AbelianInvariants:
    """Invariant factors of the exponent-sum matrix.

    Generators that occur with coefficient +-1 in some relation are
    eliminated first on sparse rows; the rest goes through a dense Smith
    reduction.
    """
    rows = _sparse_rows(P)
    alive = [True] * len(rows)
    cols: dict = {}
    for i, row in enumerate(rows):
        for k in row:
            cols.setdefault(k, set()).add(i)
    remaining = set(range(P.generator_count))
    progress = True
    while progress:
        progress = False
        order = sorted((len(rows[i]), i) for i in range(len(rows)) if alive[i])
        for _, i in order:
            if not alive[i]:
                continue
            row = rows[i]
            units = [k for k, v in row.items() if v in (1, -1)]
            if not units:
                continue
            k = min(units, key=lambda c: (len(cols[c]), c))
            u = row[k]
            alive[i] = False
            for c in row:
                cols[c].discard(i)
            for j in list(cols[k]):
                other = rows[j]
                q = other[k] * u
                for c, v in row.items():
                    nv = other.get(c, 0) - q * v
                    if nv:
                        if c not in other:
                            cols[c].add(j)
                        other[c] = nv
                    elif c in other:
                        del other[c]
                        cols[c].discard(j)
                if not other:
                    alive[j] = False
            remaining.discard(k)
            del cols[k]
            progress = True
    keep = sorted(remaining)
    pos = {k: i for i, k in enumerate(keep)}
    dense = []
    for i, row in enumerate(rows):
        if alive[i] and row:
            r = [0] * len(keep)
            for k, v in row.items():
                r[pos[k]] = v
            dense.append(r)
    diag = invariant_factors(dense, len(keep)) if dense else []
    rank = sum(1 for d in diag if d)
    return AbelianInvariants(len(keep) - rank, tuple(d for d in diag if d > 1))


# Tietze simplification -----------------------------------------------------

def simplify(P: Presentation, max_length: int = 2000) -> Presentation:
    """Eliminate generators that occur exactly once in some relator.

    Each step picks the shortest such relator, solves it for the
    generator and substitutes.  Substitutions that would push any relator
    above ``max_length`` letters are skipped.  Remaining generators are
    renumbered; names are kept.
    """
    rels = {cyclic_reduce(r) for r in P.relators}
    rels.discard(())
    live = set(range(1, P.generator_count + 1))
    while True:
        best = None
        for r in sorted(rels, key=lambda w: (len(w), w)):
            counts: dict = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for g, c in sorted(counts.items()):
                if c == 1:
                    best = (r, g)
                    break
            if best:
                # solve r = u g^e v for g^e = u^-1 v^-1 .. as a cyclic word
                r, g = best
                pos = next(i for i, x in enumerate(r) if abs(x) == g)
                rot = r[pos:] + r[:pos]
                e = rot[0]
                value = invert(rot[1:]) if e > 0 else rot[1:]
                new_rels = set()
                ok = True
                for s in rels:
                    if s == r:
                        continue
                    if any(abs(x) == g for x in s):
                        out = []
                        for x in s:
                            if x == g:
                                out += value
                            elif x == -g:
                                out += invert(value)
                            else:
                                out.append(x)
                        s = cyclic_reduce(out)
                        if len(s) > max_length:
                            ok = False
                            break
                    if s:
                        new_rels.add(s)
                if ok:
                    rels = new_rels
                    live.discard(g)
                    break
                best = None
        if best is None:
            break
    order = sorted(live)
    renum = {g: i + 1 for i, g in enumerate(order)}
    out = sorted({tuple(renum[x] if x > 0 else -renum[-x] for x in r) for r in rels},
                 key=lambda w: (len(w), w))
    names = tuple(P.name(g - 1) for g in order) if P.names else ()
    return Presentation(len(order), tuple(out), names)


# Coset enumeration -----------------------------------------------------------

class _Overflow(Exception):
    pass


def coset_enumeration_bounded(P: Presentation, limit: int = 100_000, subgroup=()):
    """Index of ``subgroup`` (words) in the presented group, by HLT
    Todd-Coxeter.  Returns None when more than ``limit`` cosets would be
    defined; a returned number is always exact."""
    ngen = P.generator_count
    if ngen == 0:
        return 1
    width = 2 * ngen

    def col(x):
        return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1

    rels = [[col(x) for x in r] for r in P.relators if r]
    subs = [[col(x) for x in w] for w in subgroup if w]
    table: list = [[-1] * width]
    parent = [0]

    def rep(k):
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def merge(k, l, queue):
        k, l = rep(k), rep(l)
        if k != l:
            lo, hi = min(k, l), max(k, l)
            parent[hi] = lo
            queue.append(hi)

    def coincidence(a, b):
        queue: list = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(width):
                d = table[g][x]
                if d < 0:
                    continue
                table[d][x ^ 1] = -1
                mu, nu = rep(g), rep(d)
                if table[mu][x] >= 0:
                    merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] >= 0:
                    merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def define(c, x):
        if len(table) >= limit:
            raise _Overflow
        n = len(table)
        table.append([-1] * width)
        parent.append(n)
        table[c][x] = n
        table[n][x ^ 1] = c

    def scan_and_fill(a, w):
        f, b = a, a
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            define(f, w[i])

    try:
        for w in subs:
            scan_and_fill(0, w)
        a = 0
        while a < len(table):
            if parent[a] == a:
                for w in rels:
                    if parent[a] != a:
                        break
                    scan_and_fill(a, w)
                if parent[a] == a:
                    for x in range(width):
                        if table[a][x] < 0:
                            define(a, x)
            a += 1
    except _Overflow:
        return None
    return sum(1 for k in range(len(table)) if parent[k] == k)


def fundamental_group_order(P: Presentation, limit: int = 100_000):
    """Order of the presented group after Tietze simplification, or None."""
    return coset_enumeration_bounded(simplify(P), limit)
