"""``ulrich-lab`` command line front end.

This is the only layer that reads or writes files. Defaults for ``--prime``
and ``--seed`` come from ``ULRICH_LAB_PRIME`` and ``ULRICH_LAB_SEED``.

Exit status: 0 on success, 2 when the MRC verdict is negative, 1 on error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Optional, Sequence

from .cacm import ProjPointSet, betti_diagram, hilbert_function, ideal_truncation_of_points
from .exactlin import DEFAULT_PRIME
from .lattice import (DelPezzo, DivClass, enumerate_classes, semigroup_generators,
                      semigroup_member, ulrich_numeric_check)
from .pipeline import RunConfig, format_report, mrc_pipeline, report_serialize

EXIT_OK, EXIT_ERROR, EXIT_MRC_FAILS = 0, 1, 2


def _env_int(name: str) -> Optional[int]:
    v = os.environ.get(name)
    return int(v) if v else None


def _surface(args) -> DelPezzo:
    return DelPezzo(args.d)


def _class(args, X: DelPezzo) -> DivClass:
    D = DivClass.parse(args.cls)
    if D.k != X.k:
        raise ValueError(f"--class needs 1 + {X.k} coefficients on X_{X.d}, got {1 + D.k}")
    return D


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_classes(args) -> int:
    X = _surface(args)
    _emit([D.to_json() for D in enumerate_classes(X, args.deg, args.selfint)])
    return EXIT_OK


def cmd_ulrich(args) -> int:
    X = _surface(args)
    _emit(ulrich_numeric_check(X, _class(args, X), args.rank).to_json())
    return EXIT_OK


def cmd_semigroup(args) -> int:
    X = _surface(args)
    D = _class(args, X)
    gens = None
    if args.generators:
        with open(args.generators) as fh:
            raw = json.load(fh)
        gens = [(DivClass.from_json(g["class"]), int(g["rank"])) for g in raw]
    gens = semigroup_generators(X, gens)
    dec = semigroup_member(X, D, gens)
    _emit({"d": X.d, "class": D.to_json(), "member": dec is not None,
           "decomposition": dec.to_json() if dec else None,
           "generators": [{"class": Q.to_json(), "rank": r} for Q, r in gens]})
    return EXIT_OK


def cmd_betti(args) -> int:
    with open(args.points) as fh:
        G = ProjPointSet.from_text(fh.read(), args.prime)
    max_row = args.max_row
    if max_row is None:
        # Rows stop once the Hilbert function reaches the number of points.
        max_row = 0
        while hilbert_function(G, max_row) < len(G):
            max_row += 1
        max_row += 1
    Dg = betti_diagram(ideal_truncation_of_points(G, max_row + 1), max_row)
    if args.json:
        _emit(Dg.to_json())
    else:
        print(Dg.format())
    return EXIT_OK


def cmd_mrc(args) -> int:
    X = _surface(args)
    D = _class(args, X)
    cfg = RunConfig.from_env(p=args.prime, seed=args.seed, gamma=args.gamma)
    rep = mrc_pipeline(X.d, D, cfg)
    text = report_serialize(rep)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text if args.json else format_report(rep))
    return EXIT_OK if rep.mrc.holds else EXIT_MRC_FAILS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ulrich-lab",
                                 description="Ulrich numerics and MRC experiments on del Pezzo surfaces")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def surface(sp):
        sp.add_argument("--d", type=int, required=True, help="degree of the del Pezzo surface, 3..9")

    def cls(sp):
        sp.add_argument("--class", dest="cls", required=True,
                        help="comma-separated coefficients a,b1,..,bk (write --class=-1,... if a < 0)")

    sp = sub.add_parser("classes", help="classes of given degree and self-intersection")
    surface(sp)
    sp.add_argument("--deg", type=int, required=True)
    sp.add_argument("--selfint", type=int, required=True)
    sp.set_defaults(func=cmd_classes)

    sp = sub.add_parser("ulrich", help="numeric Ulrich criteria for (D, r)")
    surface(sp)
    cls(sp)
    sp.add_argument("--rank", type=int, required=True)
    sp.set_defaults(func=cmd_ulrich)

    sp = sub.add_parser("semigroup", help="membership in the Ulrich semigroup")
    surface(sp)
    cls(sp)
    sp.add_argument("--generators", help='JSON file: [{"class": [a, b1, ..], "rank": r}, ...]')
    sp.set_defaults(func=cmd_semigroup)

    prime_default = _env_int("ULRICH_LAB_PRIME")
    seed_default = _env_int("ULRICH_LAB_SEED")

    sp = sub.add_parser("betti", help="Betti diagram of a point set")
    sp.add_argument("--points", required=True, help="text file, one point per line")
    sp.add_argument("--max-row", type=int, help="last diagram row (default: regularity + 1)")
    sp.add_argument("--prime", type=int, default=prime_default or DEFAULT_PRIME)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_betti)

    sp = sub.add_parser("mrc", help="full Ulrich / MRC experiment for a class")
    surface(sp)
    cls(sp)
    sp.add_argument("--prime", type=int, default=prime_default)
    sp.add_argument("--seed", type=int, default=seed_default)
    sp.add_argument("--gamma", type=int)
    sp.add_argument("--json", action="store_true", help="print the JSON report")
    sp.add_argument("--out", help="also write the JSON report to this file")
    sp.set_defaults(func=cmd_mrc)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError, ArithmeticError) as e:
        print(f"ulrich-lab: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
