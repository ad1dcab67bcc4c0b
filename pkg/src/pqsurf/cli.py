"""Command-line driver: ``pqsurf classify | verify | invariants | cover``."""

from __future__ import annotations

import argparse
import os
import re
import sys
from pathlib import Path

from .classify import Bounds, classify, families, write_records
from .covers import (
    ConfigurationError,
    CoverParseError,
    burniat_configuration,
    cover_equations,
    default_names,
    is_cover_irreducible,
    parse_building_data,
    parse_lines,
    validate_building_data,
)
from .geometry import InconsistentInvariants, hj_expansion, surface_invariants
from .groups import CatalogError, FiniteGroup, load_catalog
from .orbifold import (
    GeneratingVector,
    Signature,
    enumerate_generating_vectors,
    is_generating_vector,
)
from .pi1 import abelianization, pi1_presentation, simplify
from .tables import load_fixtures, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _catalog(args):
    try:
        cat = load_catalog(args.catalog)
        if getattr(args, "groups", None):
            cat = cat.restrict(g.strip() for g in args.groups.split(";") if g.strip())
    except (OSError, CatalogError, KeyError) as e:
        raise UsageError(f"catalog: {e}") from None
    return cat


def _signature(text: str) -> Signature:
    try:
        return Signature.parse(text)
    except ValueError as e:
        raise UsageError(f"signature {text!r}: {e}") from None


# classify ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    if not 1 <= args.k2 <= 8:
        raise UsageError("--k2 must lie in [1, 8]")
    try:
        bounds = Bounds(args.max_order, args.max_r, args.max_m)
    except ValueError as e:
        raise UsageError(str(e)) from None
    cat = _catalog(args)
    path = args.catalog
    if args.jobs > 1 and args.groups:
        raise UsageError("--groups cannot be combined with --jobs > 1")
    if args.jobs > 1 and path is None:
        path = Path(__file__).with_name("data") / "groups.cat"
    records = classify(args.k2, cat, bounds, args.require_free, args.jobs, path)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_records(records, fh)
    else:
        write_records(records, sys.stdout)
    return EXIT_OK


# verify ------------------------------------------------------------------------------

def cmd_verify(args) -> int:
    try:
        rows = load_fixtures(args.fixtures)
    except (OSError, ValueError) as e:
        raise UsageError(f"fixtures: {e}") from None
    if args.k2:
        rows = [r for r in rows if r.k2 in args.k2]
    results = verify(rows, _catalog(args))
    counts: dict = {}
    for res in results:
        print(res.format())
        counts[res.status] = counts.get(res.status, 0) + 1
    print("summary: " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items())))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


# invariants --------------------------------------------------------------------------

def _element(G: FiniteGroup, text: str) -> int:
    """Parse a permutation given as cycles ``(1 2 3)(4 5)`` or as the image
    list ``2 3 1 5 4``; points are 1-based."""
    text = text.strip()
    if text.startswith("(") or text in ("", "()"):
        images = list(range(G.degree))
        for cyc in re.findall(r"\(([^()]*)\)", text):
            pts = [int(p) - 1 for p in re.split(r"[\s,]+", cyc.strip()) if p]
            for a, b in zip(pts, pts[1:] + pts[:1]):
                images[a] = b
    else:
        images = [int(p) - 1 for p in re.split(r"[\s,]+", text) if p]
    try:
        return G.element_index(images)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _vector(G: FiniteGroup, sig: Signature, text: str) -> GeneratingVector:
    elems = [_element(G, part) for part in text.split(";")]
    h = 2 * sig.genus
    if not is_generating_vector(G, sig, elems[:h], elems[h:]):
        raise UsageError(f"{text!r} is not a generating vector of type {sig}")
    return GeneratingVector(G, sig, tuple(elems[:h]), tuple(elems[h:]))


def _default_pair(G, s1, s2):
    """Family representative with chi = 1 and the largest K_S'^2, first in
    enumeration order; the first family if none has chi = 1."""
    best = None
    fams, _ = families(G, s1, s2)
    for fam in fams:
        try:
            inv = surface_invariants(fam.V1, fam.V2)
        except InconsistentInvariants:
            continue
        if inv.chi == 1 and (best is None or inv.ks2 > best[2].ks2):
            best = (fam.V1, fam.V2, inv)
    if best is None:
        fam = fams[0]
        best = (fam.V1, fam.V2, surface_invariants(fam.V1, fam.V2))
    return best


def cmd_invariants(args) -> int:
    cat = _catalog(args)
    try:
        G = cat.find(args.group)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    s1, s2 = _signature(args.t1), _signature(args.t2)
    print(f"group: {G.display_name()}, order {G.order}")
    missing = [str(s) for s in (s1, s2) if not enumerate_generating_vectors(G, s)]
    if missing:
        print(f"no cover: {G.display_name()} has no generating vector of type "
              + " or ".join(missing))
        return EXIT_OK
    try:
        if args.v1 or args.v2:
            V1 = _vector(G, s1, args.v1) if args.v1 else enumerate_generating_vectors(G, s1)[0]
            V2 = _vector(G, s2, args.v2) if args.v2 else enumerate_generating_vectors(G, s2)[0]
            inv = surface_invariants(V1, V2)
        else:
            V1, V2, inv = _default_pair(G, s1, s2)
    except (ValueError, InconsistentInvariants) as e:
        print(f"no surface: {e}")
        return EXIT_OK
    print(f"T1: {s1}  g1 = {inv.g1}")
    print(f"T2: {s2}  g2 = {inv.g2}")
    print(f"K_X^2: {inv.kx2}")
    print(f"basket: {inv.basket}" + ("  (free action)" if inv.free else ""))
    for t in sorted(inv.basket):
        hj = ",".join(map(str, hj_expansion(t.n, t.a)))
        print(f"  {t} x{inv.basket[t]}: 1/{t.n}(1,{t.a}), HJ string [{hj}]")
    print(f"K_S'^2: {inv.ks2}")
    print(f"e(S'): {inv.euler}")
    print(f"chi(S'): {inv.chi}")
    P = pi1_presentation(G, V1, V2)
    print(f"H1: {abelianization(P)}")
    gens, rels, length = P.size()
    Q = simplify(P)
    sg, sr, sl = Q.size()
    print(f"pi1 presentation: {gens} generators, {rels} relators, total length {length}; "
          f"simplified: {sg} generators, {sr} relators, total length {sl}")
    return EXIT_OK


# cover ---------------------------------------------------------------------------------

def cmd_cover(args) -> int:
    if not args.file and not args.lines:
        raise UsageError("give a building-data file and/or --lines")
    status = EXIT_OK
    if args.file:
        try:
            bd = parse_building_data(Path(args.file).read_text(encoding="utf-8"))
        except CoverParseError as e:
            raise UsageError(f"{args.file}: {e}") from None
        except OSError as e:
            raise UsageError(str(e)) from None
        problems = validate_building_data(bd)
        print(f"lattice: {bd.lattice.name}, group Z_2^{bd.r}")
        if problems:
            print("building data: INVALID")
            for p in problems:
                print(f"  {p}")
            status = EXIT_FAIL
        else:
            print("building data: valid")
        print(f"irreducible: {'yes' if is_cover_irreducible(bd) else 'no'}")
        print("equations:")
        z_name, x_name = default_names()
        for rel in cover_equations(bd):
            print(f"  {rel.format(z_name, x_name)}")
    if args.lines:
        try:
            lines = parse_lines(Path(args.lines).read_text(encoding="utf-8"))
            conf = burniat_configuration(lines)
        except CoverParseError as e:
            raise UsageError(f"{args.lines}: {e}") from None
        except ConfigurationError as e:
            print(f"configuration: INVALID ({e})")
            return EXIT_FAIL
        except OSError as e:
            raise UsageError(str(e)) from None
        print(f"triple points: {conf.m}")
        for p in conf.triple_points:
            print("  (" + " : ".join(str(x) for x in p) + ")")
        print(f"kind: {conf.kind}{', nodal' if conf.nodal else ''}")
        print(f"K^2 = {conf.k2}")
    return status


# entry point -----------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pqsurf", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def catalog_opts(sp):
        sp.add_argument("--catalog", help="group catalog file (default: shipped catalog)")
        sp.add_argument("--groups", help="restrict the catalog, e.g. 'A5;Z5^2;16,3'")

    c = sub.add_parser("classify", help="sweep groups and signature pairs for one K^2")
    c.add_argument("--k2", type=int, required=True)
    catalog_opts(c)
    c.add_argument("--max-order", type=int)
    c.add_argument("--max-r", type=int, default=6)
    c.add_argument("--max-m", type=int)
    c.add_argument("--require-free", action="store_true")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out", help="output file (default: stdout)")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="check reference rows against the pipeline")
    v.add_argument("--fixtures", help="fixture file (default: shipped tables)")
    catalog_opts(v)
    v.add_argument("--k2", type=int, action="append", help="only rows with this K^2")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("invariants", help="report on one group and signature pair")
    i.add_argument("--group", required=True, help="name ('A5') or label ('60,5')")
    i.add_argument("--t1", required=True)
    i.add_argument("--t2", required=True)
    i.add_argument("--v1", help="elements separated by ';', as cycles or 1-based images")
    i.add_argument("--v2")
    i.add_argument("--catalog")
    i.set_defaults(func=cmd_invariants)

    k = sub.add_parser("cover", help="validate Z_2^r building data and line configurations")
    k.add_argument("file", nargs="?", help="building-data file")
    k.add_argument("--lines", help="nine-line configuration file")
    k.set_defaults(func=cmd_cover)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("pqsurf: error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"pqsurf: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
