"""Command line front end.

Exit codes: 0 success, 1 internal invariant failure or failed cross-check,
2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
from pathlib import Path

from .counting import METHODS, CountReport, count_points, invariant_gcds
from .errors import InputError, ResourceLimit, StructureViolation
from .field import FieldElement
from .intlinalg import parse_matrix, smith_normal_form, verify_snf
from .oracle import brute_count, partition_profile
from .parser import load
from .variety import VarietySpec, level_matrix

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_spec(path: str, args) -> VarietySpec:
    spec = load(_read(path), force_even=args.force_even)
    if spec.field.p == 2:
        print(
            "WARNING: characteristic 2 lies outside the proven range of the formula; "
            "results are cross-checked against brute force",
            file=sys.stderr,
        )
    return spec


def _alpha(spec: VarietySpec, text: str | None) -> FieldElement | None:
    if text is None:
        return None
    try:
        value = json.loads(text)
    except ValueError:
        raise InputError(f"--alpha {text!r}: expected an integer or [c0,c1,...]") from None
    if isinstance(value, bool) or not isinstance(value, (int, list)):
        raise InputError(f"--alpha {text!r}: expected an integer or [c0,c1,...]")
    return spec.field(value)


def _count(spec: VarietySpec, args) -> CountReport:
    return count_points(
        spec,
        alpha=_alpha(spec, args.alpha),
        fast_path=not args.no_fast_path,
        method=args.method,
        workers=args.threads,
    )


def _fmt(xs) -> str:
    return "(" + ", ".join(map(str, xs)) + ")"


def format_report(report: CountReport) -> str:
    spec = report.spec
    lines = [
        f"field {spec.field!r}  m={spec.m} t={spec.t} r={_fmt(spec.r)} n={_fmt(spec.nvars)}",
        f"alpha = {report.alpha!r}" if report.alpha is not None else "alpha = (not needed)",
    ]
    if report.zero_term is not None:
        lines.append(f"level 0: term = {report.zero_term}")
    for lv in report.levels:
        lines.append(
            f"level {lv.l}: d = {_fmt(lv.d)}  s = {lv.s}  gcd(q-1, d) = {_fmt(lv.gcds)}  "
            f"N_{lv.l} = {lv.N_l}  term = {lv.term}  [{lv.path}]"
        )
    lines.append(f"total = {report.total}")
    return "\n".join(lines)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _verify_checks(spec: VarietySpec, report: CountReport, args) -> list[tuple[str, int, int]]:
    """(name, formula side, oracle side) for every cross-check."""
    profile = partition_profile(spec, args.cap, workers=args.threads)
    brute = sum(profile.values())
    checks = [("total", report.total, brute)]
    checks.append(("M_0", report.zero_term or 0, profile[0]))
    grid = set(spec.r)
    for lv in report.levels:
        checks.append((f"M_{spec.r[lv.l - 1]} (level {lv.l})", lv.term, profile[spec.r[lv.l - 1]]))
    for n, value in profile.items():
        if n and n not in grid:
            checks.append((f"M_{n} (off grid)", 0, value))
    if "corollary31" in report.paths:
        general = count_points(spec, fast_path=False, method=args.method, workers=args.threads)
        checks.append(("general path total", general.total, brute))
    return checks


def cmd_count(args) -> int:
    spec = _load_spec(args.path, args)
    report = _count(spec, args)
    if args.json:
        sys.stdout.write(dump_json(report.to_json()))
    else:
        print(format_report(report))
    if spec.field.p == 2:
        return _report_checks(_verify_checks(spec, report, args), report.total)
    return EXIT_OK


def cmd_brute(args) -> int:
    spec = _load_spec(args.path, args)
    if args.profile:
        for n, value in partition_profile(spec, args.cap, workers=args.threads).items():
            print(f"M_{n} = {value}")
    print(f"total = {brute_count(spec, args.cap, workers=args.threads)}")
    return EXIT_OK


def _report_checks(checks, total) -> int:
    failed = [c for c in checks if c[1] != c[2]]
    if not failed:
        print(f"formula {total} == oracle {checks[0][2]}")
        print(f"all {len(checks)} cross-checks match")
        return EXIT_OK
    width = max(len(c[0]) for c in checks)
    print(f"{'check'.ljust(width)}  {'formula':>12}  {'oracle':>12}")
    for name, lhs, rhs in checks:
        mark = "" if lhs == rhs else "  <-- MISMATCH"
        print(f"{name.ljust(width)}  {lhs:>12}  {rhs:>12}{mark}")
    return EXIT_INTERNAL


def cmd_verify(args) -> int:
    spec = _load_spec(args.path, args)
    report = _count(spec, args)
    return _report_checks(_verify_checks(spec, report, args), report.total)


def _print_snf(A, snf, indent=""):
    if not verify_snf(A, snf):
        raise StructureViolation("computed Smith normal form failed verification")
    print(f"{indent}d = {_fmt(snf.d)}  r = {snf.r}")
    for name, M in (("U", snf.U), ("V", snf.V)):
        print(f"{indent}{name} =")
        print("\n".join(indent + "  " + row for row in str(M).splitlines()))


def cmd_snf(args) -> int:
    data = _read(args.path)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise InputError(f"{args.path} is not UTF-8 text") from None
    try:
        A = parse_matrix(text)
    except InputError:
        A = None
    if A is not None:
        print(f"matrix {A.rows}x{A.cols}")
        _print_snf(A, smith_normal_form(A))
        return EXIT_OK
    spec = load(data, force_even=args.force_even)
    q = spec.q
    for l in range(1, spec.t + 1):
        E = level_matrix(spec, l)
        snf = smith_normal_form(E)
        gcds = invariant_gcds(snf, q)
        print(f"level {l}: E is {E.rows}x{E.cols}, s_{l} = {snf.r}, gcd(q-1, d) = {_fmt(gcds)}")
        print("  E =")
        print("\n".join("    " + row for row in str(E).splitlines()))
        _print_snf(E, snf, indent="  ")
    return EXIT_OK


def _median_ns(fn, repeat: int) -> int:
    samples = []
    for _ in range(repeat):
        tic = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - tic)
    return int(statistics.median(samples))


def cmd_bench(args) -> int:
    rows = []
    for path in args.paths:
        spec = _load_spec(path, args)
        case = Path(path).stem
        rows.append((case, "formula", args.repeat, _median_ns(lambda: _count(spec, args), args.repeat)))
        rows.append(
            (
                case,
                "oracle",
                args.repeat,
                _median_ns(lambda: brute_count(spec, args.cap, workers=args.threads), args.repeat),
            )
        )
    print(f"{'case':<16} {'path':<8} {'runs':>4} {'median_ms':>12}")
    for case, path, runs, ns in rows:
        print(f"{case:<16} {path:<8} {runs:>4} {ns / 1e6:>12.3f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["case", "path", "runs", "median_ns"])
            writer.writerows(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--force-even", action="store_true", help="allow characteristic 2")
    common.add_argument("--threads", type=int, default=1, help="worker processes for scans")
    common.add_argument("--cap", type=int, default=None, help="oracle point cap (default $VARCOUNT_CAP or 1e8)")
    common.add_argument("--alpha", help="primitive element, e.g. 3 or [1,1]")
    common.add_argument("--method", choices=METHODS, default="residue", help="index-condition filter")
    common.add_argument("--no-fast-path", action="store_true", help="never use the closed form for N_l")

    parser = argparse.ArgumentParser(prog="varcount", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count points with the SNF formula")
    p.add_argument("path")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("brute", parents=[common], help="count points by exhaustive evaluation")
    p.add_argument("path")
    p.add_argument("--profile", action="store_true", help="also print M_n per nonzero-monomial count")
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("verify", parents=[common], help="cross-check formula against brute force")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("snf", parents=[common], help="print Smith normal form data")
    p.add_argument("path", help="a system file or an integer matrix file")
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("bench", parents=[common], help="time formula against brute force")
    p.add_argument("paths", nargs="+")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--csv", help="write case,path,runs,median_ns rows here")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (StructureViolation, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
