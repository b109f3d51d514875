"""Command line interface: ``polyinv <command> ...``.

Exit codes: 0 success, 1 I/O or parse error, 2 verification failure,
3 weakly but not strongly nilpotent, 4 not nilpotent.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .corpus import SuiteCaps, exhaustive_fern_check, load_corpus, run_suite, seeded_entries
from .inversion import (
    InversionError,
    degree_bound_report,
    invert_fixed_point,
    invert_strongly_nilpotent,
    invert_via_trees,
    verify_inverse,
)
from .mapfile import MapDocument, MapFormatError, dump_map, read_map
from .multipoly import variables
from .nilpotency import nilpotency_report
from .polymap import HPart
from .trees import count_trees

EXIT_OK = 0
EXIT_IO = 1
EXIT_VERIFY = 2
EXIT_WEAK_ONLY = 3
EXIT_NOT_NILPOTENT = 4


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_nilpotency(args) -> int:
    doc = read_map(args.mapfile)
    rep = nilpotency_report(doc.H)
    sys.stdout.write(rep.render())
    if rep.strong_index is not None:
        return EXIT_OK
    return EXIT_WEAK_ONLY if rep.weak_index is not None else EXIT_NOT_NILPOTENT


def cmd_bound(args) -> int:
    doc = read_map(args.mapfile)
    try:
        cert = degree_bound_report(doc.H, doc.map_id or Path(args.mapfile).stem)
    except InversionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    sys.stdout.write(cert.render())
    return EXIT_OK if cert.proven_bounds_hold else EXIT_VERIFY


def _inverse_doc(G: HPart, certificate: dict) -> MapDocument:
    # X + G, stored in the X+H convention
    return MapDocument(-G, "X+H", {"certificate": certificate})


def cmd_invert(args) -> int:
    doc = read_map(args.mapfile)
    H = doc.H
    map_id = doc.map_id or Path(args.mapfile).stem
    xs = variables(H.n)

    if args.method == "fixedpoint" and args.degree is None:
        try:
            if nilpotency_report(H).strong_index is not None:
                inv, cert = invert_strongly_nilpotent(H, map_id)
            else:
                cert = degree_bound_report(H, map_id)
                inv = invert_fixed_point(H, cert.inverse_degree).as_map()
        except InversionError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VERIFY
        G = HPart(H.n, tuple(c - x for c, x in zip(inv, xs)))
        _emit(dump_map(_inverse_doc(G, {"method": "fixedpoint", **cert.to_dict()})), args.out)
        return EXIT_OK if cert.proven_bounds_hold else EXIT_VERIFY

    D = args.degree
    if D is None:
        p = nilpotency_report(H).strong_index
        if p is None:
            print("error: --degree is required unless JH is strongly nilpotent", file=sys.stderr)
            return EXIT_IO
        D = max(2, H.map_degree() ** (p - 1))
    series = {}
    if args.method in ("fixedpoint", "both"):
        series["fixedpoint"] = invert_fixed_point(H, D)
    if args.method in ("trees", "both"):
        series["trees"] = invert_via_trees(H, max(D, 2)) if D >= 2 else invert_fixed_point(H, D)
    agree = len({s.components for s in series.values()}) == 1
    chosen = next(iter(series.values()))
    left, right = verify_inverse(H, chosen.as_map())
    cert = {
        "method": args.method,
        "truncation_degree": D,
        "methods_agree": agree,
        "left_composition_ok": left,
        "right_composition_ok": right,
        "polynomial_inverse": left and right,
        "inverse_degree": chosen.degree(),
    }
    _emit(dump_map(_inverse_doc(chosen.nonlinear_part(), cert)), args.out)
    return EXIT_OK if agree and left and right else EXIT_VERIFY


def cmd_ferncheck(args) -> int:
    doc = read_map(args.mapfile)
    H = doc.H
    p = args.p if args.p is not None else nilpotency_report(H).strong_index
    if p is None:
        print("JH is not strongly nilpotent; pass --p to check a given length")
        return EXIT_NOT_NILPOTENT
    m = args.max_alpha if args.max_alpha is not None else H.degree()
    total, bad = exhaustive_fern_check(H, p, m)
    if bad is None:
        print(f"all vanish ({total} specs, p={p}, |alpha| <= {m})")
        return EXIT_OK
    i, j, alphas, val = bad
    print(f"violation: i={i + 1} j={j + 1} alphas={[list(a) for a in alphas]} sum={val}")
    return EXIT_VERIFY


def cmd_treecount(args) -> int:
    alpha = tuple(int(a) for a in args.alpha.split(","))
    if not 1 <= args.i <= len(alpha):
        print(f"error: root type must be in 1..{len(alpha)}", file=sys.stderr)
        return EXIT_IO
    print(count_trees(args.i - 1, alpha, args.max_outdeg, args.max_height))
    return EXIT_OK


def cmd_suite(args) -> int:
    corpus = load_corpus(args.corpus)
    if args.seed is not None:
        corpus = corpus + seeded_entries(args.seed)
    caps = SuiteCaps(
        fern_max_alpha=args.fern_max_alpha,
        truncation_max_alpha=args.max_alpha,
        tree_max_n=args.tree_max_n,
    )
    report = run_suite(corpus, caps, jobs=args.jobs)
    _emit(report.render(), args.out)
    if args.json:
        Path(args.json).write_text(report.to_json(), encoding="utf-8")
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyinv", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nilpotency", help="weak and strong nilpotency indices of JH")
    p.add_argument("mapfile")
    p.set_defaults(func=cmd_nilpotency)

    p = sub.add_parser("bound", help="verified inverse degree against the degree bounds")
    p.add_argument("mapfile")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("invert", help="write the inverse map with a certificate block")
    p.add_argument("mapfile")
    p.add_argument("--method", choices=("trees", "fixedpoint", "both"), default="fixedpoint")
    p.add_argument("--degree", type=int, help="truncation degree D")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("ferncheck", help="exhaustive check that all fern sums vanish")
    p.add_argument("mapfile")
    p.add_argument("--max-alpha", type=int, help="cap on |alpha^(l)| (default deg H)")
    p.add_argument("--p", type=int, help="fern height (default: strong index)")
    p.set_defaults(func=cmd_ferncheck)

    p = sub.add_parser("treecount", help="count the classes in S_(i,alpha)")
    p.add_argument("i", type=int, help="root type, 1-based")
    p.add_argument("alpha", help="comma-separated multi-index, e.g. 3,0,2,1")
    p.add_argument("--max-outdeg", type=int)
    p.add_argument("--max-height", type=int)
    p.set_defaults(func=cmd_treecount)

    p = sub.add_parser("suite", help="run every check over a corpus")
    p.add_argument("--corpus", help="directory of map files or a single file (default: packaged corpus)")
    p.add_argument("--seed", type=int, help="also check maps generated from this seed")
    p.add_argument("--max-alpha", type=int, default=5, help="|alpha| cap for the height-truncation check")
    p.add_argument("--fern-max-alpha", type=int, help="|alpha^(l)| cap for fern sums (default deg H)")
    p.add_argument("--tree-max-n", type=int, default=3, help="skip tree checks above this dimension")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write the text report here")
    p.add_argument("--json", help="also write a JSON report here")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (OSError, MapFormatError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
