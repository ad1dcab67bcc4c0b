"""Singularities of (C1 x C2)/G and invariants of its minimal resolution."""

from __future__ import annotations

import re
from collections import Counter
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .orbifold import GeneratingVector, rh_genus, stabilizer_set


class InconsistentInvariants(ValueError):
    """Raised when e(S') or chi(S') come out non-integral."""


@dataclass(frozen=True, order=True)
class SingularityType:
    """Cyclic quotient singularity 1/n(1,a)."""

    n: int
    a: int

    def __post_init__(self):
        if self.n < 2 or not 1 <= self.a < self.n or gcd(self.n, self.a) != 1:
            raise ValueError(f"invalid singularity type 1/{self.n}(1,{self.a})")

    def __str__(self) -> str:
        return f"{self.a}/{self.n}"


class Basket(Counter):
    """Multiset of singularity types.  Text form: ``1/2^2``, ``1/3,2/3``."""

    def types(self) -> list[SingularityType]:
        return sorted(self.elements())

    def __str__(self) -> str:
        if not self:
            return "-"
        parts = []
        for t in sorted(self):
            k = self[t]
            parts.append(f"{t}^{k}" if k > 1 else str(t))
        return ",".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Basket":
        text = text.strip()
        b = cls()
        if text in ("", "-", "∅"):
            return b
        for tok in text.split(","):
            m = re.fullmatch(r"\s*(\d+)/(\d+)(?:\^(\d+))?\s*", tok)
            if not m:
                raise ValueError(f"bad basket token {tok!r}")
            t = SingularityType(int(m.group(2)), int(m.group(1)))
            b[t] += int(m.group(3) or 1)
        return b

    def __hash__(self):
        return hash(tuple(sorted(self.items())))


def hj_expansion(n: int, a: int) -> list[int]:
    """Hirzebruch-Jung continued fraction n/a = b1 - 1/(b2 - 1/(...))."""
    return list(_hj(n, a))


@lru_cache(maxsize=None)
def _hj(n: int, a: int) -> tuple:
    SingularityType(n, a)
    out = []
    p, q = n, a
    while q:
        b = -(-p // q)  # ceiling
        out.append(b)
        p, q = q, b * q - p
    return tuple(out)


def hj_value(bs) -> Fraction:
    """Evaluate b1 - 1/(b2 - 1/(...))."""
    v = Fraction(bs[-1])
    for b in reversed(bs[:-1]):
        v = b - 1 / v
    return v


def kx_squared(g1: int, g2: int, order: int) -> Fraction:
    if g1 < 2 or g2 < 2:
        raise ValueError("curve genera must be at least 2")
    return Fraction(8 * (g1 - 1) * (g2 - 1), order)


def _solve_tridiagonal(diag, off, rhs):
    """Exact solution of a symmetric tridiagonal system (constant off-diagonal)."""
    n = len(diag)
    c = [Fraction(0)] * n
    d = [Fraction(0)] * n
    c[0] = Fraction(off, diag[0])
    d[0] = Fraction(rhs[0], diag[0])
    for i in range(1, n):
        den = diag[i] - off * c[i - 1]
        c[i] = off / den
        d[i] = (rhs[i] - off * d[i - 1]) / den
    x = [Fraction(0)] * n
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def discrepancies(t: SingularityType) -> list[Fraction]:
    """Coefficients d_i with K_S' = pi^* K_X + sum d_i E_i along the HJ string."""
    bs = hj_expansion(t.n, t.a)
    # intersection matrix: -b_i on the diagonal, 1 between neighbours;
    # adjunction gives K.E_i = b_i - 2
    return _solve_tridiagonal([-b for b in bs], 1, [b - 2 for b in bs])


@lru_cache(maxsize=None)
def resolution_correction(t: SingularityType) -> Fraction:
    """K_X^2 - K_S'^2 contributed by one point of type t (always >= 0)."""
    bs = hj_expansion(t.n, t.a)
    d = discrepancies(t)
    # (sum d_i E_i)^2 = sum d_i (K.E_i)
    return -sum((di * (b - 2) for di, b in zip(d, bs)), Fraction(0))


def canonical_type(n: int, a: int) -> SingularityType:
    """1/n(1,a) and 1/n(1,a') with a a' = 1 mod n are the same germ (swap the
    coordinates); keep the smaller of the two exponents."""
    return SingularityType(n, min(a, pow(a, -1, n)))


def is_rdp(t: SingularityType) -> bool:
    return t.a == t.n - 1


def euler_and_chi(g1: int, g2: int, order: int, basket: Basket):
    """(e(S'), chi(O_S')) for the minimal resolution of (C1 x C2)/G."""
    ex = Fraction(4 * (g1 - 1) * (g2 - 1), order)
    ex += sum((1 - Fraction(1, t.n) for t in basket.elements()), Fraction(0))
    e = ex + sum(len(hj_expansion(t.n, t.a)) for t in basket.elements())
    if e.denominator != 1:
        raise InconsistentInvariants(f"non-integral Euler number {e}")
    ks2 = kx_squared(g1, g2, order) - sum(
        (resolution_correction(t) for t in basket.elements()), Fraction(0))
    chi = (ks2 + e) / 12
    return int(e), chi


def _check_same_group(V1: GeneratingVector, V2: GeneratingVector):
    if V1.group is not V2.group:
        raise ValueError("generating vectors must belong to the same group")


def action_is_free(V1: GeneratingVector, V2: GeneratingVector) -> bool:
    _check_same_group(V1, V2)
    return stabilizer_set(V1) & stabilizer_set(V2) == {0}


def fixed_point_data(V1: GeneratingVector, V2: GeneratingVector) -> Basket:
    return Basket(p.type for p in fixed_point_orbits(V1, V2))


@dataclass(frozen=True)
class FixedPointOrbit:
    """One G-orbit of points with nontrivial stabilizer on C1 x C2.

    The representative is the pair (<gamma_i>, d <delta_j>) of cosets; the
    stabilizer is generated by gamma_i^(m_i/n) = d delta_j^t d^-1.
    """

    i: int  # branch index on the first curve
    j: int  # branch index on the second curve
    d: int  # double coset representative
    t: int  # exponent of delta_j
    type: SingularityType


def fixed_point_orbits(V1: GeneratingVector, V2: GeneratingVector) -> list[FixedPointOrbit]:
    _check_same_group(V1, V2)
    G = V1.group
    mul, inv = G.mul, G.inv
    out = []
    for i, g in enumerate(V1.branch_part):
        m = G.orders[g]
        gpow = [0] * m
        for k in range(1, m):
            gpow[k] = mul[gpow[k - 1]][g]
        for j, h in enumerate(V2.branch_part):
            mj = G.orders[h]
            hpow = [0] * mj
            for k in range(1, mj):
                hpow[k] = mul[hpow[k - 1]][h]
            seen = bytearray(G.order)
            for d in range(G.order):
                if seen[d]:
                    continue
                # mark the double coset <g> d <h>
                for x in gpow:
                    row = mul[mul[x][d]]
                    for y in hpow:
                        seen[row[y]] = 1
                dinv = inv[d]
                conj = {mul[mul[d][y]][dinv]: t for t, y in enumerate(hpow)}
                common = [k for k in range(m) if gpow[k] in conj]
                n = len(common)
                if n <= 1:
                    continue
                gen = gpow[m // n]
                t = conj[gen]
                step = mj // n
                assert t % step == 0
                a = (t // step) % n
                out.append(FixedPointOrbit(i, j, d, t, canonical_type(n, a)))
    return out


@dataclass(frozen=True)
class SurfaceInvariants:
    kx2: Fraction
    ks2: Fraction
    euler: int
    chi: Fraction
    basket: Basket = field(compare=False)
    g1: int = 0
    g2: int = 0

    @property
    def free(self) -> bool:
        return not self.basket


def surface_invariants(V1: GeneratingVector, V2: GeneratingVector) -> SurfaceInvariants:
    G = V1.group
    g1 = rh_genus(G.order, V1.signature)
    g2 = rh_genus(G.order, V2.signature)
    basket = fixed_point_data(V1, V2)
    kx2 = kx_squared(g1, g2, G.order)
    ks2 = kx2 - sum((resolution_correction(t) for t in basket.elements()), Fraction(0))
    e, chi = euler_and_chi(g1, g2, G.order, basket)
    return SurfaceInvariants(kx2, ks2, e, chi, basket, g1, g2)
