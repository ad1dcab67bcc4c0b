"""Regenerate src/pqsurf/data/groups.cat.

Each group is written as permutation generators.  Abstractly defined groups
(normal forms with an explicit multiplication) are written in their regular
representation; everything else uses a small natural action.  The comment
block above every entry records the realization so the catalog can be
audited without running this script.

    python scripts/build_catalog.py > src/pqsurf/data/groups.cat
"""

from __future__ import annotations

import itertools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pqsurf.groups import FiniteGroup, format_group  # noqa: E402


def cyc(degree, *cycles):
    """Permutation (0-based images) from 1-based disjoint cycles."""
    p = list(range(degree))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            p[a - 1] = b - 1
    return tuple(p)


def shift(p, offset, degree):
    """Embed a permutation on 1..len(p) into 1..degree starting at offset+1."""
    q = list(range(degree))
    for i, j in enumerate(p):
        q[i + offset] = j + offset
    return tuple(q)


def direct(*factors):
    """Direct product of permutation groups given as (degree, gens)."""
    degree = sum(d for d, _ in factors)
    gens, off = [], 0
    for d, gs in factors:
        gens += [shift(g, off, degree) for g in gs]
        off += d
    return degree, gens


def regular(elements, mul, gens):
    """Right regular representation: point x goes to x * g."""
    idx = {e: i for i, e in enumerate(elements)}
    return len(elements), [tuple(idx[mul(e, g)] for e in elements) for g in gens]


def closure(gens, mul, identity):
    seen = [identity]
    s = {identity}
    for x in seen:
        for g in gens:
            y = mul(x, g)
            if y not in s:
                s.add(y)
                seen.append(y)
    return seen


def abstract(gens, mul, identity):
    return regular(closure(gens, mul, identity), mul, gens)


def cyclic(n):
    return n, [cyc(n, list(range(1, n + 1)))] if n > 1 else []


def metacyclic(n, m, r, top_power=0):
    """<x, y | x^n, y^m = x^top_power, y^-1 x y = x^r> in normal form x^i y^j."""

    def mul(a, b):
        (i, j), (k, l) = a, b
        # y^j x^k = x^(k r^j) y^j  (from y^-1 x y = x^r we get x y = y x^r,
        # hence y^j x^k y^-j = x^(k r^-j)); use r^-j via pow with modulus.
        rj = pow(r, -j, n) if j else 1
        e = i + k * rj
        jj = j + l
        if jj >= m:
            jj -= m
            e += top_power
        return (e % n, jj)

    return abstract([(1, 0), (0, 1)], mul, (0, 0))


def dihedral(n):
    """Symmetries of the n-gon on its vertices, order 2n."""
    rot = cyc(n, list(range(1, n + 1)))
    refl = tuple((-i) % n for i in range(n))  # vertex k -> -k (0-based)
    return n, [rot, refl]


def quaternion8():
    # elements as (sign, unit) with unit in 1,i,j,k
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def mul(a, b):
        s, u = table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    return abstract([(1, "i"), (1, "j")], mul, (1, "1"))


def matmul_gauss(a, b):
    """2x2 matrices over Z[i], entries as (re, im) pairs."""

    def cm(x, y):
        return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def ca(x, y):
        return (x[0] + y[0], x[1] + y[1])

    return tuple(
        tuple(ca(cm(a[r][0], b[0][c]), cm(a[r][1], b[1][c])) for c in range(2))
        for r in range(2)
    )


def pauli():
    z, o, m, i = (0, 0), (1, 0), (-1, 0), (0, 1)
    X = ((z, o), (o, z))
    Z = ((o, z), (z, m))
    iI = ((i, z), (z, i))
    ident = ((o, z), (z, o))
    return abstract([X, Z, iI], matmul_gauss, ident)


def affine_gf(p, dim, matrices):
    """Affine group generated by translations of F_p^dim and the given matrices."""
    points = list(itertools.product(range(p), repeat=dim))
    idx = {v: k for k, v in enumerate(points)}
    gens = []
    for t in range(dim):
        e = [0] * dim
        e[t] = 1
        gens.append(tuple(idx[tuple((v[s] + e[s]) % p for s in range(dim))] for v in points))
    for M in matrices:
        gens.append(tuple(
            idx[tuple(sum(M[r][c] * v[c] for c in range(dim)) % p for r in range(dim))]
            for v in points))
    return len(points), gens


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    M = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for r in range(len(b)):
            for c in range(len(b)):
                M[off + r][off + c] = b[r][c]
        off += len(b)
    return M


def projective_line_7():
    inf = 7

    def f(a, b, c, d):
        # Moebius map x -> (a x + b) / (c x + d) on F7 u {inf}
        def apply(x):
            if x == inf:
                return inf if c == 0 else a * pow(c, -1, 7) % 7
            num, den = (a * x + b) % 7, (c * x + d) % 7
            return inf if den == 0 else num * pow(den, -1, 7) % 7
        return tuple(apply(x) for x in range(8))

    return 8, [f(1, 1, 0, 1), f(2, 0, 0, 1), f(0, 6, 1, 0)]


# (order, index, name, realization comment, (degree, generators))
ENTRIES = []


def add(order, index, name, comment, rep):
    ENTRIES.append((order, index, name, comment, rep))


def build():
    add(1, 1, "1", "trivial group", (1, []))
    for n, idx in [(2, 1), (3, 1), (4, 1), (5, 1), (6, 2), (7, 1), (8, 1), (9, 1),
                   (10, 2), (12, 2), (16, 1)]:
        add(n, idx, f"Z{n}", f"cyclic: one {n}-cycle", cyclic(n))
    add(4, 2, "Z2^2", "Z2 x Z2 on 4 points: (1 2), (3 4)", direct(cyclic(2), cyclic(2)))
    add(6, 1, "S3", "S3 on 3 points", (3, [cyc(3, [1, 2, 3]), cyc(3, [1, 2])]))
    add(8, 2, "Z2xZ4", "Z4 x Z2: (1 2 3 4), (5 6)", direct(cyclic(4), cyclic(2)))
    add(8, 3, "D4", "dihedral of order 8 on the square's vertices",
        (4, [cyc(4, [1, 2, 3, 4]), cyc(4, [1, 3])]))
    add(8, 4, "Q8", "quaternion group, regular representation on {+-1,+-i,+-j,+-k}",
        quaternion8())
    add(8, 5, "Z2^3", "three disjoint transpositions", direct(cyclic(2), cyclic(2), cyclic(2)))
    add(9, 2, "Z3^2", "two disjoint 3-cycles", direct(cyclic(3), cyclic(3)))
    add(10, 1, "D5", "dihedral of order 10 on the pentagon", dihedral(5))
    add(12, 1, "Dic3", "<x,y | x^6, y^2 = x^3, y^-1 x y = x^-1>, regular",
        metacyclic(6, 2, 5, top_power=3))
    add(12, 3, "A4", "A4 on 4 points: (1 2 3), (1 2)(3 4)",
        (4, [cyc(4, [1, 2, 3]), cyc(4, [1, 2], [3, 4])]))
    add(12, 4, "D6", "dihedral of order 12 on the hexagon", dihedral(6))
    add(12, 5, "Z2xZ6", "(1..6), (7 8)", direct(cyclic(6), cyclic(2)))
    # all fourteen groups of order 16, in SmallGroups numbering
    add(16, 2, "Z4^2", "two disjoint 4-cycles", direct(cyclic(4), cyclic(4)))

    def g16_3(a, b):
        # (Z4 x Z2) : Z2 = <a,b,c | a^4, b^2, c^2, [a,b], [b,c], c a c = a b>,
        # normal form a^i b^j c^k
        (i, j, k), (i2, j2, k2) = a, b
        return ((i + i2) % 4, (j + j2 + k * i2) % 2, (k + k2) % 2)

    add(16, 3, "G(16,3)",
        "(Z4 x Z2) : Z2 = <a,b,c | a^4, b^2, c^2, [a,b], [b,c], c a c = a b>, regular",
        abstract([(1, 0, 0), (0, 1, 0), (0, 0, 1)], g16_3, (0, 0, 0)))
    add(16, 4, "Z4:Z4", "<x,y | x^4, y^4, y^-1 x y = x^-1>, regular", metacyclic(4, 4, 3))
    add(16, 5, "Z2xZ8", "(1..8), (9 10)", direct(cyclic(8), cyclic(2)))
    add(16, 6, "M16", "<x,y | x^8, y^2, y x y = x^5>, regular", metacyclic(8, 2, 5))
    add(16, 7, "D8", "dihedral of order 16 on the octagon", dihedral(8))
    add(16, 8, "QD16", "<x,y | x^8, y^2, y x y = x^3>, regular", metacyclic(8, 2, 3))
    add(16, 9, "Q16", "<x,y | x^8, y^2 = x^4, y^-1 x y = x^-1>, regular",
        metacyclic(8, 2, 7, top_power=4))
    add(16, 10, "Z2^2xZ4", "(1 2 3 4), (5 6), (7 8)", direct(cyclic(4), cyclic(2), cyclic(2)))
    add(16, 11, "Z2xD4", "D4 on 4 points times (5 6)",
        direct((4, [cyc(4, [1, 2, 3, 4]), cyc(4, [1, 3])]), cyclic(2)))
    add(16, 12, "Z2xQ8", "Q8 regular times (9 10)", direct(quaternion8(), cyclic(2)))
    add(16, 13, "Z4oD4", "Pauli group <X, Z, iI> in GL(2, Z[i]), regular", pauli())
    add(16, 14, "Z2^4", "four disjoint transpositions",
        direct(cyclic(2), cyclic(2), cyclic(2), cyclic(2)))
    add(18, 3, "Z3xS3", "(1 2 3) times S3 on {4,5,6}",
        direct(cyclic(3), (3, [cyc(3, [1, 2, 3]), cyc(3, [1, 2])])))
    add(18, 4, "Z3^2:Z2", "(1 2 3), (4 5 6), (1 2)(4 5): the involution inverts Z3^2",
        (6, [cyc(6, [1, 2, 3]), cyc(6, [4, 5, 6]), cyc(6, [1, 2], [4, 5])]))
    add(24, 12, "S4", "S4 on 4 points", (4, [cyc(4, [1, 2, 3, 4]), cyc(4, [1, 2])]))
    add(24, 13, "Z2^3:Z3", "A4 x Z2 = Z2^3 : Z3: A4 on 4 points times (5 6)",
        direct((4, [cyc(4, [1, 2, 3]), cyc(4, [1, 2], [3, 4])]), cyclic(2)))
    add(25, 2, "Z5^2", "two disjoint 5-cycles", direct(cyclic(5), cyclic(5)))
    add(32, 27, "G(32,27)",
        "Z2^4 : Z2 = (Z2^2) wr Z2: Klein four regular on {1..4} and on {5..8}, "
        "swapped by (1 5)(2 6)(3 7)(4 8)",
        (8, [cyc(8, [1, 2], [3, 4]), cyc(8, [1, 3], [2, 4]),
             cyc(8, [5, 6], [7, 8]), cyc(8, [5, 7], [6, 8]),
             cyc(8, [1, 5], [2, 6], [3, 7], [4, 8])]))
    add(36, 10, "S3xS3", "S3 on {1,2,3} times S3 on {4,5,6}",
        direct((3, [cyc(3, [1, 2, 3]), cyc(3, [1, 2])]), (3, [cyc(3, [1, 2, 3]), cyc(3, [1, 2])])))
    add(48, 48, "Z2xS4", "S4 on 4 points times (5 6)",
        direct((4, [cyc(4, [1, 2, 3, 4]), cyc(4, [1, 2])]), cyclic(2)))
    add(60, 5, "A5", "A5 on 5 points: (1 2 3 4 5), (1 2 3)",
        (5, [cyc(5, [1, 2, 3, 4, 5]), cyc(5, [1, 2, 3])]))
    add(75, 2, "Z5^2:Z3",
        "affine maps of F5^2: translations and the order-3 matrix [[0,-1],[1,-1]]; "
        "points are F5^2 in lexicographic order",
        affine_gf(5, 2, [[[0, 4], [1, 4]]]))
    add(96, 195, "Z2^4:S3",
        "affine maps of F2^4 = F2^2 + F2^2: translations and GL(2,2) = S3 acting "
        "diagonally on both summands (generators [[0,1],[1,1]] and [[0,1],[1,0]])",
        affine_gf(2, 4, [block_diag([[0, 1], [1, 1]], [[0, 1], [1, 1]]),
                         block_diag([[0, 1], [1, 0]], [[0, 1], [1, 0]])]))
    add(120, 34, "S5", "S5 on 5 points", (5, [cyc(5, [1, 2, 3, 4, 5]), cyc(5, [1, 2])]))
    add(160, 234, "Z2^4:D5",
        "even sign changes of 5 coordinates extended by D5: signed permutations on "
        "{1..5} u {6..10} (i <-> i+5 is the sign flip); rotation (1..5)(6..10), "
        "reflection (2 5)(3 4)(7 10)(8 9), double flip (1 6)(2 7)",
        (10, [cyc(10, [1, 2, 3, 4, 5], [6, 7, 8, 9, 10]),
              cyc(10, [2, 5], [3, 4], [7, 10], [8, 9]),
              cyc(10, [1, 6], [2, 7])]))
    add(168, 42, "PSL(2,7)",
        "PSL(2,7) on the projective line over F7, points 0..6 then infinity: "
        "x -> x+1, x -> 2x, x -> -1/x",
        projective_line_7())
    add(240, 189, "Z2xS5", "S5 on 5 points times (6 7)",
        direct((5, [cyc(5, [1, 2, 3, 4, 5]), cyc(5, [1, 2])]), cyclic(2)))
    add(360, 118, "A6", "A6 on 6 points: (1 2 3 4 5), (4 5 6)",
        (6, [cyc(6, [1, 2, 3, 4, 5]), cyc(6, [4, 5, 6])]))


def main():
    build()
    out = [
        "# Group catalog for pqsurf.",
        "# Format: 'group <order> <index> <degree> [<name>]', one 'perm' line per",
        "# generator (images of 1..degree), then 'end'.  <index> follows the",
        "# numbering of the GAP/MAGMA SmallGroups library.",
        "# Generated by scripts/build_catalog.py; realizations are documented per entry.",
        "",
    ]
    for order, index, name, comment, (degree, gens) in sorted(ENTRIES, key=lambda e: e[:2]):
        G = FiniteGroup.from_generators(gens, degree, label=(order, index), name=name)
        if G.order != order:
            raise SystemExit(f"{name}: realization has order {G.order}, expected {order}")
        out.append(f"# {name}: {comment}")
        out.append(format_group(G))
        out.append("")
    sys.stdout.write("\n".join(out))


if __name__ == "__main__":
    main()
