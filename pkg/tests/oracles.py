"""Slow, independent reference computations used by the test suite."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from pqsurf.pi1 import AbelianInvariants, invariant_factors


def perm_compose(p, q):
    """p then q, on 0-based image tuples."""
    return tuple(q[i] for i in p)


def perm_order(p):
    k, x = 1, p
    ident = tuple(range(len(p)))
    while x != ident:
        x = perm_compose(x, p)
        k += 1
    return k


def perm_closure(gens, degree):
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = perm_compose(x, g)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


def brute_force_vector_count(G, multiplicities) -> int:
    """Count tuples of permutations (g_1..g_r) with ord(g_i) = m_i, product 1
    and <g_i> = G, directly on the permutation representation."""
    elems = list(G.elements)
    ident = tuple(range(G.degree))
    if not multiplicities:
        return 1 if len(elems) == 1 else 0
    by_order = {}
    for e in elems:
        by_order.setdefault(perm_order(e), []).append(e)
    count = 0
    for tup in itertools.product(*(by_order.get(m, []) for m in multiplicities)):
        prod = ident
        for x in tup:
            prod = perm_compose(prod, x)
        if prod != ident:
            continue
        if len(perm_closure(set(tup), G.degree)) == len(elems):
            count += 1
    return count


def determinant(M) -> int:
    """Exact determinant via fractions."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return int(det)


def minor_gcd(M, k: int) -> int:
    m, n = len(M), len(M[0])
    g = 0
    for rows in itertools.combinations(range(m), k):
        for cols in itertools.combinations(range(n), k):
            g = gcd(g, determinant([[M[i][j] for j in cols] for i in rows]))
    return g


def fox_h1(P, action, extra=()) -> AbelianInvariants:
    """H_1 of the finite-index subgroup with the given coset action, computed
    from the chain complex of the covering 2-complex of P.

    ``extra`` lists words (based at coset 0, lying in the subgroup) that are
    killed in addition, as 1-cycles of the cover.
    """
    n = len(action[0])
    g = P.generator_count
    back = [[0] * n for _ in range(g)]
    for k in range(g):
        for c, d in enumerate(action[k]):
            back[k][d] = c

    def lift(word, start):
        row = [0] * (n * g)
        x = start
        for letter in word:
            if letter > 0:
                row[x * g + letter - 1] += 1
                x = action[letter - 1][x]
            else:
                x = back[-letter - 1][x]
                row[x * g - letter - 1] -= 1
        return row, x

    rows = []
    for c in range(n):
        for r in P.relators:
            row, end = lift(r, c)
            assert end == c
            rows.append(row)
    for w in extra:
        row, end = lift(w, 0)
        assert end == 0
        rows.append(row)
    d = invariant_factors(rows, n * g)
    rank = sum(1 for v in d if v)
    # H_1 = ker(d1) / im(d2); the 1-skeleton is connected with n vertices
    return AbelianInvariants.from_cyclic_factors(
        n * g - rank - (n - 1), [abs(v) for v in d if abs(v) > 1])
