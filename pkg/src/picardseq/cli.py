"""Command line entry point: ``picardseq <command> <fixture> ...``.

Exit status: 0 when every requested verdict passes, 1 when one fails,
2 for usage errors and unreadable or invalid fixtures.
"""
import argparse
import json
import sys
import time

from . import exactla
from .errors import FixtureError, FixtureValidationError, PicardSeqError
from .fixture import bundled_names, parse_fixture
from .extgroups import context, ker_D_characterize, ker_hat_characterize
from .sequences import describe, diagram, reports_json, verify

GROUPS = ("inv", "aut-sr", "aut-rrings", "ker-d", "ker-hat")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="picardseq",
        description="Groups and exact sequences of a ring extension R in S over F_p.",
        epilog="Fixtures are JSON files or bundled names: " + ", ".join(bundled_names()),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate a fixture")
    p.add_argument("fixture")

    p = sub.add_parser("groups", help="list the elements of one group")
    p.add_argument("--which", required=True, choices=GROUPS)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("fixture")

    p = sub.add_parser("verify-seq", help="check exactness of the sequences")
    p.add_argument("--n", required=True, choices=("1", "2", "3", "4", "all"))
    p.add_argument("--report", metavar="OUT", help="write the JSON report to OUT")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--cap", type=int, default=64, help="class cap for P(S/R) (default 64)")
    p.add_argument("fixture")

    p = sub.add_parser("diagram", help="the four sequences as one graph")
    p.add_argument("--dot", metavar="OUT", help="write dot output to OUT ('-' for stdout)")
    p.add_argument("fixture")
    return ap


def _load(path):
    fx = parse_fixture(path)
    return fx, fx.extension()


def cmd_check(args, out):
    fx, ext = _load(args.fixture)
    print(f"{fx.name}: p = {fx.p}, dim S = {ext.S.dim}, dim R = {ext.R.dim}, "
          f"{len(fx.local_units)} local unit(s)", file=out)
    print("valid", file=out)
    return 0


def _group(ext, which):
    ctx = context(ext)
    if which == "inv":
        return ctx.inv
    if which == "aut-sr":
        return ctx.aut_sr
    if which == "aut-rrings":
        return ctx.aut_rrings
    if which == "ker-d":
        return ker_D_characterize(ext).kernel
    return ker_hat_characterize(ext).kernel


def cmd_groups(args, out):
    fx, ext = _load(args.fixture)
    g = _group(ext, args.which)
    rows = []
    for k in g:
        obj = g.payload[k]
        row = {"element": describe(g, k), "neutral": k == g.neutral}
        if args.which == "inv":
            row["inverse"] = obj.Y.matrix.tolist()
        rows.append(row)
    if args.format == "json":
        print(json.dumps({"fixture": fx.name, "group": args.which, "order": len(g),
                          "elements": rows}, indent=2), file=out)
        return 0
    print(f"{g.name} of {fx.name}: order {len(g)}", file=out)
    for i, row in enumerate(rows):
        tag = " (neutral)" if row["neutral"] else ""
        print(f"  [{i}]{tag} {row['element']}", file=out)
    return 0


def cmd_verify(args, out):
    fx, ext = _load(args.fixture)
    which = (1, 2, 3, 4) if args.n == "all" else (int(args.n),)
    t0 = time.perf_counter()
    reports = verify(ext, which, args.cap)
    for r in reports:
        r.fixture = fx.name
    ok = all(r.passed for r in reports)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(reports_json(reports) + "\n")
    if args.format == "json":
        print(reports_json(reports), file=out)
    else:
        for r in reports:
            print(f"{fx.name} sequence {r.sequence}: {'PASS' if r.passed else 'FAIL'}", file=out)
            if not r.passed:
                print(r.text(), file=out)
        print(f"{fx.name}: {sum(r.passed for r in reports)}/{len(reports)} passed "
              f"in {time.perf_counter() - t0:.2f}s [{exactla.BACKEND}]", file=out)
    return 0 if ok else 1


def cmd_diagram(args, out):
    fx, ext = _load(args.fixture)
    d = diagram(ext)
    d.fixture = fx.name
    if args.dot == "-":
        out.write(d.dot())
    else:
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(d.dot())
        print(d.text(), file=out)
    return 0


COMMANDS = {"check": cmd_check, "groups": cmd_groups, "verify-seq": cmd_verify, "diagram": cmd_diagram}


def run(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return COMMANDS[args.command](args, out)
    except (FixtureError, FixtureValidationError) as exc:
        print(f"picardseq: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"picardseq: {exc}", file=sys.stderr)
        return 2
    except PicardSeqError as exc:
        print(f"picardseq: verification error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
