"""Z_2^r covers from building data, and the line configurations behind
singular bidouble covers of the plane."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


# Lattices and classes --------------------------------------------------------

@dataclass(frozen=True)
class PicardLattice:
    name: str
    names: tuple
    form: tuple  # symmetric integer matrix
    canonical_class: tuple

    def __post_init__(self):
        n = len(self.names)
        if len(self.form) != n or any(len(row) != n for row in self.form):
            raise ValueError("intersection form must be square of size rank")
        if any(self.form[i][j] != self.form[j][i] for i in range(n) for j in range(n)):
            raise ValueError("intersection form must be symmetric")
        if len(self.canonical_class) != n:
            raise ValueError("canonical class has the wrong length")

    @property
    def rank(self) -> int:
        return len(self.names)

    def cls(self, coefficients) -> "DivisorClass":
        return DivisorClass(self, tuple(int(c) for c in coefficients))

    def zero(self) -> "DivisorClass":
        return self.cls([0] * self.rank)

    @property
    def K(self) -> "DivisorClass":
        return self.cls(self.canonical_class)

    def dot(self, a, b) -> int:
        return sum(a[i] * self.form[i][j] * b[j] for i in range(self.rank) for j in range(self.rank))


@dataclass(frozen=True)
class DivisorClass:
    lattice: PicardLattice
    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) != self.lattice.rank:
            raise ValueError(f"class needs {self.lattice.rank} coefficients")

    def _same(self, other):
        if other.lattice != self.lattice:
            raise ValueError("classes live in different lattices")

    def __add__(self, other):
        self._same(other)
        return DivisorClass(self.lattice, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other):
        self._same(other)
        return DivisorClass(self.lattice, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self):
        return DivisorClass(self.lattice, tuple(-a for a in self.coefficients))

    def __rmul__(self, k: int):
        return DivisorClass(self.lattice, tuple(k * a for a in self.coefficients))

    def dot(self, other) -> int:
        self._same(other)
        return self.lattice.dot(self.coefficients, other.coefficients)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def __str__(self) -> str:
        terms = []
        for c, n in zip(self.coefficients, self.lattice.names):
            if c == 0:
                continue
            coef = "" if abs(c) == 1 else str(abs(c))
            terms.append(("-" if c < 0 else "+") + coef + n)
        if not terms:
            return "0"
        s = "".join(terms)
        return s[1:] if s[0] == "+" else s


DEL_PEZZO_6 = PicardLattice(
    "delpezzo6", ("L", "E1", "E2", "E3"),
    ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1)),
    (-3, 1, 1, 1))
ELLIPTIC_PRODUCT = PicardLattice(
    "elliptic_product", ("f1", "f2"), ((0, 1), (1, 0)), (0, 0))
LATTICES = {lat.name: lat for lat in (DEL_PEZZO_6, ELLIPTIC_PRODUCT)}


# Building data ------------------------------------------------------------------

def _pair(chi: tuple, sigma: tuple) -> int:
    return sum(a * b for a, b in zip(chi, sigma)) % 2


def nonzero_vectors(r: int) -> list[tuple]:
    return [v for v in itertools.product((0, 1), repeat=r) if any(v)]


def _add(a: tuple, b: tuple) -> tuple:
    return tuple((x + y) % 2 for x, y in zip(a, b))


def basis_character(i: int, r: int) -> tuple:
    """chi_i for i in 1..r."""
    return tuple(int(k == i - 1) for k in range(r))


@dataclass(frozen=True)
class BuildingData:
    """D_sigma for nonzero sigma in Z_2^r and L_i for the basis characters."""

    lattice: PicardLattice
    r: int
    D: dict
    L: dict  # i (1-based) -> class

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be positive")
        for s in self.D:
            if len(s) != self.r or not any(s) or any(b not in (0, 1) for b in s):
                raise ValueError(f"bad group element {s}")
        if set(self.L) != set(range(1, self.r + 1)):
            raise ValueError(f"need L_1..L_{self.r}")

    def divisor(self, sigma: tuple) -> DivisorClass:
        return self.D.get(tuple(sigma), self.lattice.zero())

    def branch_sum(self, chi: tuple) -> DivisorClass:
        """Sum of D_sigma over sigma with chi(sigma) = 1."""
        total = self.lattice.zero()
        for s in nonzero_vectors(self.r):
            if _pair(chi, s):
                total = total + self.divisor(s)
        return total

    def common(self, chi: tuple, eta: tuple) -> list[tuple]:
        """The sigma with chi(sigma) = eta(sigma) = 1, in lexicographic order."""
        return [s for s in nonzero_vectors(self.r) if _pair(chi, s) and _pair(eta, s)]

    def derived_L(self) -> dict:
        """L_chi for every nonzero character, built up from the basis by
        L_(chi+eta) = L_chi + L_eta - sum_(chi(s)=eta(s)=1) D_s."""
        out = {basis_character(i, self.r): self.L[i] for i in range(1, self.r + 1)}
        for chi in nonzero_vectors(self.r):
            if chi in out:
                continue
            k = max(i for i in range(self.r) if chi[i])
            e = basis_character(k + 1, self.r)
            rest = _add(chi, e)
            total = out[rest] + out[e]
            for s in self.common(rest, e):
                total = total - self.divisor(s)
            out[chi] = total
        return out


def validate_building_data(bd: BuildingData) -> list[str]:
    """Violated conditions as readable strings; an empty list means valid."""
    problems = []
    for i in range(1, bd.r + 1):
        chi = basis_character(i, bd.r)
        lhs, rhs = 2 * bd.L[i], bd.branch_sum(chi)
        if lhs != rhs:
            problems.append(f"2 L_{i} = {lhs} but the branch divisors give {rhs}")
    if problems:
        return problems
    Ls = bd.derived_L()
    for chi in nonzero_vectors(bd.r):
        lhs, rhs = 2 * Ls[chi], bd.branch_sum(chi)
        if lhs != rhs:
            problems.append(f"2 L_{_bits(chi)} = {lhs} but the branch divisors give {rhs}")
    for chi, eta in itertools.combinations(nonzero_vectors(bd.r), 2):
        s = _add(chi, eta)
        total = Ls[chi] + Ls[eta]
        for sig in bd.common(chi, eta):
            total = total - bd.divisor(sig)
        if total != Ls[s]:
            problems.append(f"L_{_bits(chi)} + L_{_bits(eta)} is inconsistent with L_{_bits(s)}")
    return problems


def is_cover_irreducible(bd: BuildingData) -> bool:
    """True iff the sigma with D_sigma != 0 span Z_2^r."""
    span = {tuple([0] * bd.r)}
    for s, d in bd.D.items():
        if d.is_zero():
            continue
        span |= {_add(v, s) for v in span}
    return len(span) == 2 ** bd.r


@dataclass(frozen=True)
class CoverRelation:
    """z_chi z_eta = z_(chi+eta) * prod x_sigma (z_0 = 1)."""

    chi: tuple
    eta: tuple
    target: tuple
    divisors: tuple

    def format(self, z_name, x_name) -> str:
        left = f"{z_name(self.chi)}^2" if self.chi == self.eta else f"{z_name(self.chi)}{z_name(self.eta)}"
        right = [x_name(s) for s in self.divisors]
        if any(self.target):
            right.append(z_name(self.target))
        return f"{left} = {' '.join(right) if right else '1'}"


def _bits(v: tuple) -> str:
    return "".join(map(str, v))


def default_names():
    return (lambda chi: f"z_{_bits(chi)}"), (lambda s: f"x_{_bits(s)}")


# Fibre coordinates u_i of L_(i+1) and equations delta_i of D_i, in the
# indexing where D_1, D_2, D_3 sit at sigma = 10, 01, 11.
BURNIAT_SIGMA = {1: (1, 0), 2: (0, 1), 3: (1, 1)}
BURNIAT_CHAR = {1: (1, 0), 2: (1, 1), 3: (0, 1)}


def burniat_names():
    u = {v: f"u{i}" for i, v in BURNIAT_CHAR.items()}
    d = {v: f"δ{i}" for i, v in BURNIAT_SIGMA.items()}
    return (lambda chi: u[tuple(chi)]), (lambda s: d[tuple(s)])


def cover_equations(bd: BuildingData) -> list[CoverRelation]:
    """One relation per unordered pair {chi, eta} of nonzero characters
    (chi = eta included), lexicographic in (chi, eta)."""
    chars = nonzero_vectors(bd.r)
    out = []
    for a, chi in enumerate(chars):
        for eta in chars[a:]:
            divs = tuple(s for s in bd.common(chi, eta) if not bd.divisor(s).is_zero())
            out.append(CoverRelation(chi, eta, _add(chi, eta), divs))
    return out


def burniat_building_data() -> BuildingData:
    """D_i = 3L - 3E_i - E_(i+1) + E_(i+2) and L_chi = the class of the line
    bundle carrying the matching u-coordinate."""
    lat = DEL_PEZZO_6

    def E(i):
        v = [0, 0, 0, 0]
        v[(i - 1) % 3 + 1] = 1
        return lat.cls(v)

    Lc = lat.cls([1, 0, 0, 0])
    D = {BURNIAT_SIGMA[i]: 3 * Lc - 3 * E(i) - E(i + 1) + E(i + 2) for i in (1, 2, 3)}

    def script_L(i):  # 3L - 2E_(i-1) - E_(i+1)
        return 3 * Lc - 2 * E(i - 1) - E(i + 1)

    # u_1 lives on script_L(2), u_3 on script_L(1)
    L = {1: script_L(2), 2: script_L(1)}
    return BuildingData(lat, 2, D, L)


# Double covers ----------------------------------------------------------------------

class InconsistentCover(ValueError):
    pass


def double_cover_invariants(lattice: PicardLattice, chi_Y: int, KY2: int | None,
                            L: DivisorClass) -> tuple[int, int]:
    """(K^2, chi) of the double cover branched on a smooth divisor in |2L|."""
    K = lattice.K
    if KY2 is not None and K.dot(K) != KY2:
        raise InconsistentCover(f"K_Y^2 = {K.dot(K)} in the lattice, {KY2} given")
    KL = K + L
    k2 = 2 * KL.dot(KL)
    twice = L.dot(L + K)
    if twice % 2:
        raise InconsistentCover("L.(L + K_Y) is odd: chi would not be an integer")
    return k2, 2 * chi_Y + twice // 2


def free_quotient(k2: int, chi: int, order: int) -> tuple[int, int]:
    """Invariants of the quotient by a free action of a group of the given order."""
    if k2 % order or chi % order:
        raise InconsistentCover(f"({k2}, {chi}) is not divisible by {order}")
    return k2 // order, chi // order


# Parsing ------------------------------------------------------------------------------

class CoverParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def parse_building_data(text: str) -> BuildingData:
    lattice = None
    D: dict = {}
    L: dict = {}
    r = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "lattice":
                if len(tok) != 2 or tok[1] not in LATTICES:
                    raise CoverParseError(f"unknown lattice {' '.join(tok[1:])!r}; "
                                          f"known: {', '.join(sorted(LATTICES))}", lineno)
                lattice = LATTICES[tok[1]]
                continue
            if lattice is None:
                raise CoverParseError("'lattice' must come first", lineno)
            if tok[0] not in ("D", "L"):
                raise CoverParseError(f"unknown keyword {tok[0]!r}", lineno)
            if len(tok) != 2 + lattice.rank:
                raise CoverParseError(f"expected {lattice.rank} coefficients", lineno)
            coeffs = [int(c) for c in tok[2:]]
            if tok[0] == "D":
                if not re.fullmatch(r"[01]+", tok[1]) or "1" not in tok[1]:
                    raise CoverParseError(f"bad group element {tok[1]!r}", lineno)
                sigma = tuple(int(b) for b in tok[1])
                if r is None:
                    r = len(sigma)
                elif len(sigma) != r:
                    raise CoverParseError("group elements of different lengths", lineno)
                if sigma in D:
                    raise CoverParseError(f"D_{tok[1]} given twice", lineno)
                D[sigma] = lattice.cls(coeffs)
            else:
                i = int(tok[1])
                if i in L:
                    raise CoverParseError(f"L_{i} given twice", lineno)
                L[i] = lattice.cls(coeffs)
        except ValueError as exc:
            if isinstance(exc, CoverParseError):
                raise
            raise CoverParseError(str(exc), lineno) from None
    if lattice is None:
        raise CoverParseError("missing 'lattice' line")
    if r is None:
        r = len(L)
    if set(L) != set(range(1, r + 1)):
        raise CoverParseError(f"need L lines for 1..{r}")
    return BuildingData(lattice, r, D, L)


def format_building_data(bd: BuildingData) -> str:
    lines = [f"lattice {bd.lattice.name}"]
    for s in nonzero_vectors(bd.r):
        if s in bd.D:
            lines.append(f"D {_bits(s)} " + " ".join(map(str, bd.D[s].coefficients)))
    for i in range(1, bd.r + 1):
        lines.append(f"L {i} " + " ".join(map(str, bd.L[i].coefficients)))
    return "\n".join(lines) + "\n"


# Burniat line configurations -------------------------------------------------------

POINTS = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _normalize(v) -> tuple:
    v = [Fraction(x) for x in v]
    k = next(i for i, x in enumerate(v) if x != 0)
    return tuple(x / v[k] for x in v)


def _cross(a, b) -> tuple:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _on(line, point) -> bool:
    return sum(a * b for a, b in zip(line, point)) == 0


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class BurniatConfiguration:
    m: int
    kind: str
    nodal: bool
    triple_points: tuple

    @property
    def k2(self) -> int:
        return 6 - self.m


_KINDS = {0: "primary", 1: "secondary", 2: "secondary", 3: "tertiary", 4: "quaternary"}


def burniat_configuration(lines: Sequence) -> BurniatConfiguration:
    """Count the points off P_1, P_2, P_3 where three of the nine lines meet.

    Lines are coefficient triples (a, b, c) of a y1 + b y2 + c y3 = 0, in the
    order D_11, D_12, D_13, D_21, ..., D_33.  D_i1 must be the side y_(i-1) = 0
    through P_i and P_(i+1); D_i2 and D_i3 are further lines through P_i.
    Nodal means that three points of multiplicity >= 3 of the plane curve
    (the P_i count, they have multiplicity 4) are collinear.
    """
    if len(lines) != 9:
        raise ConfigurationError("exactly nine lines are required")
    L = []
    for n, ln in enumerate(lines):
        if len(ln) != 3 or all(Fraction(x) == 0 for x in ln):
            raise ConfigurationError(f"line {n + 1} is not a line")
        L.append(_normalize(ln))
    if len(set(L)) != 9:
        raise ConfigurationError("coincident lines")
    for i in range(3):
        P, Pnext = POINTS[i], POINTS[(i + 1) % 3]
        side = L[3 * i]
        if not (_on(side, P) and _on(side, Pnext)):
            raise ConfigurationError(f"D_{i + 1},1 must join P_{i + 1} and P_{(i + 1) % 3 + 1}")
        for j in (1, 2):
            if not _on(L[3 * i + j], P):
                raise ConfigurationError(f"D_{i + 1},{j + 1} must pass through P_{i + 1}")
    through: dict = {}
    for a, b in itertools.combinations(range(9), 2):
        p = _normalize(_cross(L[a], L[b]))
        through.setdefault(p, set()).update((a, b))
    specials = {_normalize(P) for P in POINTS}
    triple = sorted(p for p, s in through.items() if len(s) >= 3 and p not in specials)
    m = len(triple)
    if m > 4:
        raise ConfigurationError(f"{m} triple points; at most 4 are possible")
    heavy = sorted(specials) + triple
    nodal = any(_det(a, b, c) == 0 for a, b, c in itertools.combinations(heavy, 3))
    return BurniatConfiguration(m, _KINDS[m], nodal, tuple(triple))


def _det(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def parse_lines(text: str) -> list[tuple]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] != "line" or len(tok) != 4:
            raise CoverParseError("expected 'line <a> <b> <c>'", lineno)
        try:
            out.append(tuple(Fraction(t) for t in tok[1:]))
        except (ValueError, ZeroDivisionError):
            raise CoverParseError(f"bad rational in {line!r}", lineno) from None
    return out
