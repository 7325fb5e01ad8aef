"""Command-line interface: ``latticelinks <command> ...``.

Exit codes: 0 success (an unrecognized link type is still a success),
1 validation or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .core import Axis, LinkFormatError, parse_link, serialize_link, stick_counts, validate
from .diagram import diagram_to_svg, sheared_projection
from .invariants import CrossingBudgetExceeded, invariants_of, label_from_invariants
from .leveling import LevelingError, level_all, level_axis

log = logging.getLogger("latticelinks")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_link(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return parse_link(text)


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _axis(text: str) -> Axis:
    try:
        return Axis["XYZ"["xyz".index(text.lower())]]
    except ValueError:
        raise UsageError(f"bad axis {text!r}") from None


def _components(text: str, max_sticks: int) -> tuple:
    """``2``, ``1,2``, ``2+`` or ``all``."""
    top = max(1, max_sticks // 4)
    text = text.strip()
    try:
        if text == "all":
            return tuple(range(1, top + 1))
        if text.endswith("+"):
            return tuple(range(int(text[:-1]), top + 1))
        vals = tuple(sorted({int(v) for v in text.split(",")}))
    except ValueError:
        raise UsageError(f"bad --components value {text!r}") from None
    if not vals or min(vals) < 1:
        raise UsageError("component counts must be positive")
    return vals


def _profile(text):
    if text is None:
        return None
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad profile {text!r}") from None
    if len(vals) != 3 or min(vals) < 0:
        raise UsageError("a profile is three non-negative integers a,b,c")
    return vals


# --------------------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        link = _read_link(args.path)
    except LinkFormatError as exc:
        print(f"format error: {exc}")
        return EXIT_FAIL
    report = validate(link)
    if report.ok:
        c = stick_counts(link)
        print(f"valid: {len(link.components)} component(s), {c.total} sticks, counts {tuple(c)}")
        return EXIT_OK
    for v in report.violations:
        print(f"violation: {v}")
    return EXIT_FAIL


def _classify_record(link, axis=None) -> dict:
    inv = invariants_of(link, axis)
    label = label_from_invariants(inv)
    lo, coeffs = inv.jones.coefficients()
    return {
        "label": label.name,
        "chirality": label.chirality,
        "components": inv.components,
        "counts": list(stick_counts(link)),
        "axis": inv.axis.name.lower(),
        "crossings": inv.crossings,
        "linking": [list(r) for r in inv.linking],
        "jones_lo": lo,
        "jones": coeffs,
        "jones_text": repr(inv.jones),
    }


def cmd_classify(args) -> int:
    try:
        link = _read_link(args.path)
    except LinkFormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = validate(link)
    if not report.ok:
        for v in report.violations:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_FAIL
    axis = _axis(args.axis) if args.axis else None
    try:
        rec = _classify_record(link, axis)
    except CrossingBudgetExceeded as exc:
        rec = {"label": "UNRECOGNIZED", "reason": f"crossing budget: {exc}"}
    print(json.dumps(rec, sort_keys=True))
    if args.svg:
        ax = _axis(rec["axis"]) if "axis" in rec else Axis.Z
        Path(args.svg).write_text(diagram_to_svg(sheared_projection(link, ax)), encoding="utf-8")
    return EXIT_OK


def cmd_level(args) -> int:
    try:
        link = _read_link(args.path)
    except LinkFormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = validate(link)
    if not report.ok:
        for v in report.violations:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_FAIL
    try:
        out = level_all(link) if args.axis == "all" else level_axis(link, _axis(args.axis))
    except LevelingError as exc:
        print(f"leveling failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if tuple(stick_counts(out)) != tuple(stick_counts(link)):
        print("stick counts changed; refusing to write", file=sys.stderr)
        return EXIT_FAIL
    _write(serialize_link(out), args.output)
    return EXIT_OK


def cmd_census(args) -> int:
    from .census import build_report, run_census

    if args.max_sticks < 4:
        raise UsageError("--max-sticks must be at least 4")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    comps = _components(args.components, args.max_sticks)
    profile = _profile(args.profile)

    def progress(done, total):
        if not args.quiet:
            print(f"\r{done}/{total} units", end="", file=sys.stderr, flush=True)

    try:
        run_census(args.out, args.max_sticks, comps, args.mode, args.jobs, profile,
                   min_sticks=args.min_sticks, progress=progress)
    except ValueError as exc:
        print(f"\n{exc}", file=sys.stderr)
        return EXIT_FAIL
    if not args.quiet:
        print(file=sys.stderr)
    report = build_report(args.out, sample=args.sample)
    sys.stdout.write(report.to_text())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_witness(args) -> int:
    from .enumeration import minimal_witness

    try:
        found = minimal_witness(args.target, args.max_sticks, args.mode, start=args.min_sticks)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    if found is None:
        print(f"no {args.target} witness with at most {args.max_sticks} sticks ({args.mode} mode)")
        return EXIT_FAIL
    link, n = found
    text = f"# {args.target} witness, {n} sticks, {args.mode} mode\n" + serialize_link(link)
    if args.output:
        _write(text, args.output)
        print(f"{args.target}: {n} sticks -> {args.output}")
    else:
        print(f"{args.target}: {n} sticks")
        sys.stdout.write(text)
    return EXIT_OK


def cmd_report(args) -> int:
    from .census import build_report

    report = build_report(args.dir, sample=args.sample, seed=args.seed)
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    if report.failures:
        print(f"{len(report.failures)} record(s) failed re-verification", file=sys.stderr)
    if report.duplicates:
        print(f"{report.duplicates} duplicate record(s)", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latticelinks", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a link file")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("classify", help="invariants and link type of a link file")
    s.add_argument("path")
    s.add_argument("--axis", help="projection axis (default: fewest crossings)")
    s.add_argument("--svg", help="also write the projection as SVG")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("level", help="extended properly leveled representative")
    s.add_argument("path")
    s.add_argument("--axis", default="all", choices=["x", "y", "z", "all"])
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_level)

    s = sub.add_parser("census", help="enumerate and classify all leveled links")
    s.add_argument("--max-sticks", type=int, required=True)
    s.add_argument("--min-sticks", type=int, default=4)
    s.add_argument("--components", default="all", help="K, K1,K2, K+ or all (default)")
    s.add_argument("--mode", default="unconstrained", choices=["unconstrained", "constrained"])
    s.add_argument("--profile", help="restrict to one profile a,b,c")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", required=True)
    s.add_argument("--sample", type=int, default=20, help="records to re-verify (-1: all)")
    s.add_argument("-q", "--quiet", action="store_true")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("witness", help="smallest embedding of a link type")
    s.add_argument("target")
    s.add_argument("--max-sticks", type=int, required=True)
    s.add_argument("--min-sticks", type=int, default=4)
    s.add_argument("--mode", default="unconstrained", choices=["unconstrained", "constrained"])
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("report", help="summarize a census directory")
    s.add_argument("dir")
    s.add_argument("--json", action="store_true")
    s.add_argument("--sample", type=int, default=20, help="records to re-verify (-1: all)")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
