"""Command-line entry point ``tropcoh``.

Exit codes: 0 success, 1 invalid input, 2 invariant violation, 3 I/O error.
JSON results go to ``--output`` or standard output; diagnostics and status
lines go to standard error.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from . import serialize as ser
from .acceptance import run_acceptance
from .cohomology import Region, cohomology_table, in_validated_envelope, pd_check
from .curve import check_balancing, check_smooth
from .errors import InputError, InvariantViolation
from .logvalue import decode_rational
from .mumford import random_skeleton, theorem_table_global, verify_skeleton
from .tropicalize import modify, tropicalize
from .valuation import from_padic_points, validate_ultrametric

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_IO = 0, 1, 2, 3


class _IOFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc.strerror or exc}") from None
    return ser.loads(text)


def _emit(args, value) -> None:
    text = ser.dumps(value)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise _IOFailure(f"cannot write {args.output}: {exc.strerror or exc}") from None
    else:
        sys.stdout.write(text)


def _note(line: str) -> None:
    print(line, file=sys.stderr)


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name.replace('_', '-')} is required here")
    return value


def _region_from_args(args):
    """Ambient from ``--input`` (curve) or ``--skeleton``; region from ``--region`` or the whole."""
    if args.skeleton:
        ambient = ser.decode_skeleton(_read_json(args.skeleton))
    else:
        ambient = ser.decode_curve(_read_json(_need(args, "input")))
    if args.region:
        return ser.decode_region(_read_json(args.region), ambient)
    return Region.whole(ambient)


# -- subcommands -----------------------------------------------------------------------


def cmd_ingest_points(args) -> int:
    p = _need(args, "p")
    raw = [x.strip() for x in _need(args, "points").split(",") if x.strip()]
    try:
        points = [decode_rational(x) for x in raw]
    except ValueError as exc:
        raise InputError(f"--points: {exc}") from None
    _emit(args, ser.encode_matrix(from_padic_points(p, points)))
    return EXIT_OK


def cmd_tropicalize(args) -> int:
    m = ser.decode_matrix(_read_json(_need(args, "input")))
    X = tropicalize(m, args.method)
    _emit(args, ser.encode_curve(X))
    if args.method == "both":
        _note("methods agree: true")
    return EXIT_OK


def cmd_check(args) -> int:
    obj = _read_json(_need(args, "input"))
    if isinstance(obj, dict) and "L" in obj:
        report = validate_ultrametric(ser.decode_matrix(obj, validate=False))
        _emit(args, {"kind": "matrix", "ultrametric": report.ok,
                     "violations": [list(t) for t in report.violations],
                     "problems": list(report.structural)})
        return EXIT_OK if report.ok else EXIT_INPUT
    X = ser.decode_curve(obj)
    bal, smooth = check_balancing(X), check_smooth(X)
    _emit(args, {"kind": "curve", "balanced": bal.balanced,
                 "defects": {str(v): list(d) for v, d in sorted(bal.defects.items())},
                 "smooth": smooth.smooth, "non_smooth_vertices": [list(t) for t in smooth.bad_vertices],
                 "weights_all_one": all(e.weight == 1 for e in X.edges)})
    return EXIT_OK if bal.balanced and smooth.smooth else EXIT_INPUT


def cmd_modify(args) -> int:
    X = ser.decode_curve(_read_json(_need(args, "input")))
    P = ser.decode_paf(_read_json(_need(args, "paf")), X)
    mod = modify(P)
    if not mod.projects_onto_target():
        raise InvariantViolation("modification does not project onto its target")
    _emit(args, ser.encode_modification(mod))
    return EXIT_OK


def cmd_cohomology(args) -> int:
    table = cohomology_table(_region_from_args(args))
    out = ser.encode_table(table)
    _emit(args, {"hc": out["hc"]} if args.compact else out)
    return EXIT_OK


def cmd_pd(args) -> int:
    region = _region_from_args(args)
    table = cohomology_table(region)
    result = pd_check(table)
    validated = in_validated_envelope(region)
    _emit(args, {"pd": result.ok, "failures": [list(f) for f in result.failures],
                 "validated": validated, **ser.encode_table(table)})
    if not result.ok:
        if validated:
            raise InvariantViolation(f"Poincare duality fails at (p, q) in {list(result.failures)}")
        _note("warning: duality fails on a region outside the validated envelope (non-smooth curve)")
    return EXIT_OK


def cmd_mumford(args) -> int:
    if args.skeleton:
        S = ser.decode_skeleton(_read_json(args.skeleton))
    else:
        S = random_skeleton(_need(args, "genus"), random.Random(args.seed))
    table = cohomology_table(Region.whole(S))
    out = {"genus": S.genus, "skeleton": ser.encode_skeleton(S), **ser.encode_table(table)}
    if args.verify:
        report = verify_skeleton(S, seed=args.seed)
        out["verified"] = report.ok
        out["simple_regions_checked"] = report.simple_checked
        _emit(args, out)
        if not report.ok:
            for line in report.simple_failures:
                _note(line)
            raise InvariantViolation("cellular tables differ from the closed forms")
        _note("verified: true")
        return EXIT_OK
    if table != theorem_table_global(S.genus):
        raise InvariantViolation("global table differs from [[1,g],[g,1]]")
    _emit(args, out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_acceptance(args.seed, args.cases, args.jobs)
    for r in results:
        _note(r.line())
    _emit(args, {"seed": args.seed,
                 "criteria": [{"number": r.number, "name": r.name, "passed": r.passed,
                               "cases": r.cases, "detail": r.detail} for r in results]})
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVARIANT


COMMANDS = {
    "ingest-points": cmd_ingest_points,
    "tropicalize": cmd_tropicalize,
    "check": cmd_check,
    "modify": cmd_modify,
    "cohomology": cmd_cohomology,
    "pd": cmd_pd,
    "mumford": cmd_mumford,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tropcoh", description="Tropical Dolbeault cohomology toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, *flags):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--output", help="write JSON here instead of standard output")
        for flag in flags:
            flag(sp)
        return sp

    def f_input(sp):
        sp.add_argument("--input", help="input JSON file")

    def f_region(sp):
        sp.add_argument("--skeleton", help="skeleton JSON (instead of a curve in --input)")
        sp.add_argument("--region", help="region JSON; default is the whole ambient")

    def f_seed(sp):
        sp.add_argument("--seed", type=int, default=0)

    add("ingest-points", "log-distance matrix of p-adic points",
        lambda sp: sp.add_argument("--p", type=int),
        lambda sp: sp.add_argument("--points", help="comma-separated rationals, e.g. 0,1,1/5"))
    add("tropicalize", "tropicalize a log-distance matrix", f_input,
        lambda sp: sp.add_argument("--method", choices=("direct", "incremental", "both"),
                                   default="direct"))
    add("check", "validate a matrix or check balancing and smoothness of a curve", f_input)
    add("modify", "tropical modification along a piecewise affine function", f_input,
        lambda sp: sp.add_argument("--paf", help="piecewise affine function JSON"))
    add("cohomology", "dimension table of a region", f_input, f_region,
        lambda sp: sp.add_argument("--compact", action="store_true",
                                   help="only the compactly supported table"))
    add("pd", "Poincare duality check", f_input, f_region)
    add("mumford", "global table of a Mumford curve skeleton", f_seed,
        lambda sp: sp.add_argument("--genus", type=int),
        lambda sp: sp.add_argument("--skeleton", help="skeleton JSON; default is random"),
        lambda sp: sp.add_argument("--verify", action="store_true"))
    add("selftest", "run the acceptance criteria", f_seed,
        lambda sp: sp.add_argument("--cases", type=int, default=None,
                                   help="raise per-criterion case counts"),
        lambda sp: sp.add_argument("--jobs", type=int, default=1))
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except _IOFailure as exc:
        _note(f"error: {exc}")
        return EXIT_IO
    except InvariantViolation as exc:
        _note(f"invariant violation: {exc}")
        return EXIT_INVARIANT
    except InputError as exc:
        _note(f"error: {exc}")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
