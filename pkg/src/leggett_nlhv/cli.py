"""Command-line front end.

Angles on the command line are degrees.  Exit codes: 0 success, 1 usage
error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import leggett as lg
from .experiment import simulate
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2

SCAN_HEADER = ("phi_deg", "E_quantum", "bound_lower", "bound_upper", "violation")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _num(x: float) -> str:
    # repr is locale-independent and round-trips exactly
    return repr(float(x))


def _metadata(argv: Sequence[str], seed=None) -> dict:
    return {"version": __version__, "seed": seed, "command_line": ["leggett", *argv]}


def _dump_json(obj, out) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=False))
    out.write("\n")


def _write_csv(header, rows, out) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    out.write(buf.getvalue())


def scan_grid(phi_min: float, phi_max: float, step: float) -> np.ndarray:
    if not (0.0 <= phi_min < phi_max <= 180.0):
        raise UsageError(f"leggett scan: error: need 0 <= phi-min < phi-max <= 180, got {phi_min}, {phi_max}")
    if not step > 0.0:
        raise UsageError(f"leggett scan: error: step must be positive, got {step}")
    n = int(math.floor((phi_max - phi_min) / step + 1e-9))
    grid = phi_min + step * np.arange(n + 1)
    return np.minimum(grid, phi_max)


def scan_rows(phi_min: float, phi_max: float, step: float) -> list[dict]:
    rows = []
    for d in scan_grid(phi_min, phi_max, step):
        rep = lg.violation_at(float(d), degrees=True)
        rows.append(
            {
                "phi_deg": float(d),
                "E_quantum": rep.quantum_value,
                "bound_lower": rep.bounds.lower,
                "bound_upper": rep.bounds.upper,
                "violation": rep.violation,
            }
        )
    return rows


def cmd_scan(args, argv, out) -> int:
    rows = scan_rows(args.phi_min, args.phi_max, args.step)
    if args.format == "json":
        _dump_json({"metadata": _metadata(argv), "rows": rows}, out)
    else:
        _write_csv(SCAN_HEADER, ([_num(r[k]) for k in SCAN_HEADER] for r in rows), out)
    return EXIT_OK


def cmd_bounds(args, argv, out) -> int:
    phi = lg.check_angle(args.phi, degrees=True)
    closed = lg.bounds_closed_form(phi)
    rec = {"phi_deg": args.phi, "method": args.method, "lower": closed.lower, "upper": closed.upper}
    if args.method == "quadrature":
        quad = lg.QuadratureSpec("product", order=args.order)
        q = lg.bounds_by_integration(*lg.analyzer_pair(phi), quad)
        rec.update(
            order=args.order,
            lower=q.lower,
            upper=q.upper,
            closed_lower=closed.lower,
            closed_upper=closed.upper,
            deviation=max(abs(q.lower - closed.lower), abs(q.upper - closed.upper)),
        )
    if args.format == "json":
        _dump_json({"metadata": _metadata(argv), **rec}, out)
    else:
        for k, v in rec.items():
            out.write(f"{k} = {v}\n")
    return EXIT_OK


def cmd_max_violation(args, argv, out) -> int:
    if not args.tol > 0:
        raise UsageError(f"leggett max-violation: error: --tol must be positive, got {args.tol}")
    tol = math.radians(args.tol)
    mv = lg.max_violation(tol)
    paper_lo, paper_hi = lg.PAPER_MAX_VIOLATION_DEG
    rec = {
        "phi_star_deg": math.degrees(mv.phi_star),
        "phi_star_mirror_deg": math.degrees(mv.phi_star_mirror),
        "v_star": mv.v_star,
        "phi_star_exact_deg": math.degrees(2.0 * math.asin(0.25)),
        "paper_phi_star_deg": paper_lo,
        "paper_phi_star_mirror_deg": paper_hi,
        "ranges_deg": [[math.degrees(x) for x in r] for r in lg.violation_ranges(tol)],
    }
    if args.format == "json":
        _dump_json({"metadata": _metadata(argv), **rec}, out)
    else:
        out.write(f"phi_star       = {rec['phi_star_deg']:.9f} deg  (paper quotes {paper_lo})\n")
        out.write(f"phi_star'      = {rec['phi_star_mirror_deg']:.9f} deg  (paper quotes {paper_hi})\n")
        out.write(f"v_star         = {mv.v_star!r}\n")
        out.write(f"2*asin(1/4)    = {rec['phi_star_exact_deg']:.9f} deg\n")
        for lo, hi in rec["ranges_deg"]:
            out.write(f"violation on   ({lo:.6f}, {hi:.6f}) deg\n")
    return EXIT_OK


def cmd_simulate(args, argv, out) -> int:
    if args.pairs < 1:
        raise UsageError(f"leggett simulate: error: --pairs must be >= 1, got {args.pairs}")
    counts, est = simulate(
        args.phi, args.pairs, args.seed, parity=args.parity, degrees=True, workers=args.workers
    )
    rec = {
        "phi_deg": args.phi,
        "pairs": args.pairs,
        "seed": args.seed,
        "parity": args.parity,
        "counts": {"pp": counts.n_pp, "pm": counts.n_pm, "mp": counts.n_mp, "mm": counts.n_mm},
        "e_hat": est.e_hat,
        "std_err": est.std_err,
        "violation_sigma": est.violation_sigma,
    }
    if args.format == "json":
        _dump_json({"metadata": _metadata(argv, args.seed), **rec}, out)
    else:
        header = ("phi_deg", "pairs", "seed", "parity", "n_pp", "n_pm", "n_mp", "n_mm", "e_hat", "std_err", "violation_sigma")
        row = [_num(args.phi), args.pairs, args.seed, args.parity, *counts, _num(est.e_hat), _num(est.std_err), _num(est.violation_sigma)]
        _write_csv(header, [row], out)
    return EXIT_OK


def cmd_verify(args, argv, out) -> int:
    results = run_suite(args.suite, tol=args.tol)
    for r in results:
        out.write(r.line() + "\n")
    failed = sum(not r.passed for r in results)
    out.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="leggett", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("scan", help="quantum value vs closed-form bounds over an angle grid")
    s.add_argument("--phi-min", type=float, default=0.0)
    s.add_argument("--phi-max", type=float, default=180.0)
    s.add_argument("--step", type=float, default=1.0)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("bounds", help="bounds at one angle, closed form or by quadrature")
    s.add_argument("--phi", type=float, required=True)
    s.add_argument("--method", choices=("closed", "quadrature"), default="closed")
    s.add_argument("--order", type=int, default=lg.DEFAULT_ORDER)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("max-violation", help="locate the largest violation")
    s.add_argument("--tol", type=float, default=1e-6, help="optimizer tolerance in degrees")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_max_violation)

    s = sub.add_parser("simulate", help="seeded finite-statistics run")
    s.add_argument("--phi", type=float, required=True)
    s.add_argument("--pairs", type=int, default=10**6)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--parity", choices=("odd", "even"), default="odd")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--format", choices=("csv", "json"), default="json")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("verify", help="run the self-check suites")
    s.add_argument("suite", nargs="?", choices=(*SUITES, "all"), default="all")
    s.add_argument("--tol", type=float, default=None, help="override every tolerance")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, argv, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        # domain, direction and config errors from the library
        err.write(f"leggett: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
