"""Command-line entry point.

  zerodist analyze  --coeffs FILE | --family KIND [--N ..] [--p ..] [--c ..] [--seed ..]
                    [--tol T] [--kmax K] [--json OUT] [--svg OUT] [--csv OUT]
                    [--coeffs-out OUT]
  zerodist ensemble --family KIND --N .. --count C --seed-base S [--jobs J] --csv OUT
  zerodist plot     REPORT.json --svg OUT

Exit codes: 0 success, 1 input error, 2 certificate failure beyond
tolerance.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import families, report as report_mod
from .certify import CONSTANTS
from .poly import Polynomial, read_coeffs, write_coeffs
from .rootfind import RootFindingError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CERT = 2


def _family_spec_from_args(args: argparse.Namespace) -> families.FamilySpec:
    return families.FamilySpec(kind=args.family, N=args.N, p=args.p, c=args.c,
                               seed=args.seed)


def _load_input(args: argparse.Namespace) -> tuple[Polynomial, str]:
    if args.coeffs and args.family:
        raise ValueError("give either --coeffs or --family, not both")
    if args.coeffs:
        return read_coeffs(args.coeffs), f"coeffs {args.coeffs}"
    if args.family:
        return families.build_family(_family_spec_from_args(args))
    raise ValueError("an input is required: --coeffs FILE or --family KIND")


def _print_summary(rep: report_mod.AnalysisReport) -> None:
    m = rep.measures
    d = rep.discrepancy
    print(f"input: {rep.input}")
    print(f"degree: {rep.degree} (deflation order {rep.deflation_order})")
    print(f"h = {m['h']:.10f}   log H = {_safe_log(m['H']):.10f}")
    print(f"log script_M = {m['log_script_M']:.10f}   Mahler = {m['mahler']:.10f}")
    print(f"D = {d['value']:.10f}  ({d['side']} arc at {d['witness_start']:.6f}, "
          f"length {d['witness_length']:.6f})")
    fails = rep.certificates.failing()
    n_items = len([i for i in rep.certificates.items if not i.informational])
    print(f"certificates: {n_items - len(fails)}/{n_items} passed")
    for item in fails:
        print(f"  FAIL {item.name}: measured {item.measured!r} > "
              f"bound {item.bound!r} + tol {item.tolerance!r}")
    c = rep.certificates.constants
    print("constants: 8/pi = {:.4f}   ganelius = {:.4f}   catalan = {:.4f}   "
          "sqrt2 = {:.4f}".format(c["eight_over_pi"], c["ganelius"], c["catalan"],
                                  c["sqrt2"]))


def _safe_log(x: float) -> float:
    import math
    return math.log(x) if x > 0 else float("-inf")


def _cmd_analyze(args: argparse.Namespace) -> int:
    try:
        poly, description = _load_input(args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.coeffs_out:
        write_coeffs(poly, args.coeffs_out)
    try:
        rep = report_mod.analyze_polynomial(
            poly, description, tol=args.tol,
            k_range=tuple(range(1, args.kmax + 1)),
        )
    except (ValueError, RootFindingError, ArithmeticError) as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report_mod.canonical_json(rep.to_json_dict()))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(report_mod.zeros_csv(rep))
    if args.svg:
        from .plotting import save_zero_scatter
        save_zero_scatter(list(rep.roots), rep.input, args.svg)
    _print_summary(rep)
    return EXIT_OK if rep.certificates.all_passed else EXIT_CERT


def _ensemble_worker(payload: tuple) -> tuple[int, list | None, str]:
    kind, n, c, seed = payload
    try:
        spec = families.FamilySpec(kind=kind, N=n, c=c, seed=seed)
        poly, _ = families.build_family(spec)
        return seed, report_mod.ensemble_row(poly, seed), ""
    except Exception as exc:  # worker failures become flagged rows
        return seed, None, str(exc)


def _cmd_ensemble(args: argparse.Namespace) -> int:
    if args.family != "littlewood":
        print("ensemble currently draws from the seeded littlewood family",
              file=sys.stderr)
        return EXIT_INPUT
    if args.count < 1 or args.N is None:
        print("ensemble needs --count >= 1 and --N", file=sys.stderr)
        return EXIT_INPUT
    payloads = [(args.family, args.N, args.c, args.seed_base + i)
                for i in range(args.count)]
    results: list[tuple[int, list | None, str]] = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_ensemble_worker, payloads))
    else:
        results = [_ensemble_worker(p) for p in payloads]
    rows = [row for _, row, _ in results if row is not None]
    failures = [(seed, msg) for seed, row, msg in results if row is None]
    text = report_mod.ensemble_csv(rows, failures)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_plot(args: argparse.Namespace) -> int:
    try:
        with open(args.report, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        roots = payload["roots"]
        title = payload.get("input", "zeros")
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        from .plotting import save_zero_scatter
        save_zero_scatter(roots, title, args.svg)
    except (OSError, ValueError) as exc:
        print(f"plot error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerodist",
        description="Zero-distribution statistics and certificates for complex polynomials",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run the full pipeline on one polynomial")
    pa.add_argument("--coeffs", help="coefficient JSON file (low-to-high [re, im] pairs)")
    pa.add_argument("--family", choices=families.KINDS, help="built-in family")
    pa.add_argument("--N", type=int, default=None)
    pa.add_argument("--p", type=int, default=None)
    pa.add_argument("--c", type=float, default=None)
    pa.add_argument("--seed", type=int, default=None)
    pa.add_argument("--tol", type=float, default=1e-13, help="root-finder tolerance")
    pa.add_argument("--kmax", type=int, default=3, help="largest |k| for identity checks")
    pa.add_argument("--json", help="write the analysis report JSON here")
    pa.add_argument("--svg", help="write the zero-scatter SVG here")
    pa.add_argument("--csv", help="write the zero list CSV here")
    pa.add_argument("--coeffs-out", dest="coeffs_out",
                    help="write the input coefficients as coefficient JSON")
    pa.set_defaults(func=_cmd_analyze)

    pe = sub.add_parser("ensemble", help="seeded family ensemble with a CSV summary")
    pe.add_argument("--family", default="littlewood", choices=families.KINDS)
    pe.add_argument("--N", type=int, required=True)
    pe.add_argument("--c", type=float, default=None)
    pe.add_argument("--count", type=int, required=True)
    pe.add_argument("--seed-base", dest="seed_base", type=int, default=1)
    pe.add_argument("--jobs", type=int, default=1)
    pe.add_argument("--csv", help="write the summary CSV here (default stdout)")
    pe.set_defaults(func=_cmd_ensemble)

    pp = sub.add_parser("plot", help="render an existing report JSON to SVG")
    pp.add_argument("report", help="analysis report JSON")
    pp.add_argument("--svg", required=True, help="output SVG path")
    pp.set_defaults(func=_cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
