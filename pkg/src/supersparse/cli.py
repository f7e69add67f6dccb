"""Command line entry point.

Exit codes: 0 success, 1 verification mismatch, 2 bad input or domain
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .charpoly import DEFAULT_ORACLE_BUDGET, verify_family
from .companion import alpha, compose, compose_single, family_matrix, format_scalar, frobenius_companion, height
from .eig import DEFAULT_DENSE_CAP, RootCloud, format_float, root_cloud
from .errors import ConvergenceFailure, SupersparseError
from .formats import read_matrix, write_matrix
from .plot import render_svg
from .poly import Family, FamilyId, family_degree, family_poly

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

_RATIONAL = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")


class UsageError(Exception):
    pass


def parse_rational(text: str) -> Fraction:
    """Integer or ``p/q`` literal; decimals and floats are refused."""
    s = text.strip()
    if not _RATIONAL.match(s):
        raise UsageError(f"expected an integer or p/q literal, got {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise UsageError(f"zero denominator in {text!r}") from None


def _family_id(args) -> FamilyId:
    try:
        return FamilyId(Family.parse(args.family), args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_build(args) -> int:
    fid = _family_id(args)
    m = family_matrix(fid)
    out = Path(args.out) if args.out else Path(f"{fid.family.value}_{fid.n}.{args.format}")
    write_matrix(m, out, fmt=args.format)
    print(f"dim: {m.dim}")
    print(f"height: {format_scalar(height(m))}")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    family = Family.parse(args.family)
    status = EXIT_OK
    checked = 0
    for n in range(args.max_n + 1):
        fid = FamilyId(family, n)
        if family_degree(fid) < 1:
            continue
        report = verify_family(fid, budget=args.budget)
        checked += 1
        line = report.to_json() if args.json else f"{report} (dim {family_degree(fid)})"
        print(line)
        if not report:
            status = EXIT_MISMATCH
    if not checked:
        raise UsageError(f"no {family.value} member with n <= {args.max_n} has a companion")
    print("all passed" if status == EXIT_OK else "FAILED", file=sys.stderr)
    return status


def cmd_eig(args) -> int:
    fid = _family_id(args)
    cloud = root_cloud(fid, method=args.method, dense_cap=args.dense_cap)
    text = cloud.to_csv()
    if args.out:
        Path(args.out).write_text(text)
        print(f"roots: {cloud.dim}")
        print(f"max residual: {format_float(cloud.max_residual())}")
    else:
        sys.stdout.write(text)
        print(f"max residual: {format_float(cloud.max_residual())}", file=sys.stderr)
    return EXIT_OK


def _parse_bounds(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bounds must be 'xmin,xmax,ymin,ymax', got {text!r}") from None
    if len(vals) != 4 or not (vals[1] > vals[0] and vals[3] > vals[2]):
        raise UsageError(f"bounds must be 'xmin,xmax,ymin,ymax' with min < max, got {text!r}")
    return tuple(vals)


def cmd_plot(args) -> int:
    bounds = _parse_bounds(args.bounds) if args.bounds else None
    try:
        cloud = RootCloud.from_csv(Path(args.csv).read_text())
    except ValueError as exc:
        raise UsageError(f"{args.csv}: {exc}") from None
    svg = render_svg(cloud.values, bounds=bounds, title=args.title or "")
    Path(args.out).write_text(svg)
    print(f"wrote {args.out} ({cloud.dim} points)")
    return EXIT_OK


def cmd_degree(args) -> int:
    print(family_degree(_family_id(args)))
    return EXIT_OK


def cmd_height(args) -> int:
    fid = _family_id(args)
    h = format_scalar(height(family_matrix(fid)))
    if args.compare_frobenius:
        hf = format_scalar(height(frobenius_companion(family_poly(fid))))
        print(f"supersparse: {h}, frobenius: {hf}")
    else:
        print(h)
    return EXIT_OK


def cmd_compose(args) -> int:
    c0 = parse_rational(args.c0)
    a = read_matrix(args.a)
    b = read_matrix(args.b) if args.b else None
    c = compose(a, b, c0) if b is not None else compose_single(a, c0)
    write_matrix(c, args.out, fmt=args.format)
    print(f"alpha: {format_scalar(alpha(a, b))}")
    print(f"dim: {c.dim}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supersparse",
        description="Supersparse Hessenberg companions for z*a(z)*b(z) + c0 and Mandelbrot-type families.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    families = [f.value for f in Family]

    def family_args(p, n_flag="--n"):
        p.add_argument("--family", required=True, choices=families)
        p.add_argument(n_flag, required=True, type=int, dest=n_flag.lstrip("-").replace("-", "_"))

    p = sub.add_parser("build", help="write a family companion matrix")
    family_args(p)
    p.add_argument("--out", help="output path (default <family>_<n>.<format>)")
    p.add_argument("--format", choices=["mtx", "json"], default="mtx")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="exact check of char poly against the recurrence")
    family_args(p, "--max-n")
    p.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET, help="largest dimension to expand")
    p.add_argument("--json", action="store_true", help="one JSON report per line")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eig", help="root cloud CSV from the eigenvalues of a family matrix")
    family_args(p)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--method", choices=["francis", "lapack"], default="francis")
    p.add_argument("--dense-cap", type=int, default=DEFAULT_DENSE_CAP)
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("plot", help="SVG scatter of a root CSV")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.add_argument("--bounds", help="xmin,xmax,ymin,ymax")
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("degree", help="degree from the integer recurrence, no expansion")
    family_args(p)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("height", help="largest entry magnitude of the family companion")
    family_args(p)
    p.add_argument("--compare-frobenius", action="store_true")
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("compose", help="compose user supplied Hessenberg factors")
    p.add_argument("--a", required=True, help="first factor (.mtx or .json)")
    p.add_argument("--b", help="second factor; omit for z*a(z) + c0")
    p.add_argument("--c0", required=True, help="integer or p/q")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["mtx", "json"])
    p.set_defaults(func=cmd_compose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 0) < 0 or getattr(args, "max_n", 0) < 0:
        print("error: n must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SupersparseError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
