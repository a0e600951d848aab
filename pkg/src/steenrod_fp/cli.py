"""Command-line entry point: ``steenrod-fp apply|verify|suite|partition``.

Exit codes: 0 success, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from .action import HQ_METHODS, ExpressionError, apply_expression, parse_expression
from .checks import REGISTRY, CheckSpec, UsageError, default_grid, dumps, exit_code, load_specs, run_check, run_suite
from .modp import PrimeError, check_prime
from .partitions import Partition, PartitionError, partition_report
from .poly import PolynomialError, format_polynomial, parse_polynomial

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _prime(text: str) -> int:
    try:
        return check_prime(int(text))
    except (ValueError, PrimeError) as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _kv(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def _coerce(v: str):
    try:
        return int(v)
    except ValueError:
        return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="steenrod-fp", description="Steenrod operations on F_p[x1..xn] and identity checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("apply", help="apply an operator expression to a polynomial")
    a.add_argument("--p", type=_prime, required=True)
    a.add_argument("--nvars", type=int, required=True)
    a.add_argument("--op", required=True, help='e.g. "P^8 P^1", "Hq{2}", "chi(P^5)", "P(2,1)"')
    a.add_argument("--poly", required=True, help='e.g. "(x1*x2)^2"')
    a.add_argument("--method", choices=sorted(HQ_METHODS), default="cartan")

    v = sub.add_parser("verify", help="run one check")
    v.add_argument("--check", required=True, choices=list(REGISTRY))
    v.add_argument("--p", type=int, required=True)
    for name in ("n", "b", "r", "u", "v", "s"):
        v.add_argument(f"--{name}", type=int)
    v.add_argument("--lambda", dest="lam")
    v.add_argument("--param", type=_kv, action="append", default=[], metavar="KEY=VALUE", help="extra parameters (comp, a, R, mono, bset, poly, nvars, ...)")
    v.add_argument("--expected", help="canonical text to compare the final identity against")
    v.add_argument("--unbounded", action="store_true", help="lift desk-scale parameter bounds")
    v.add_argument("--timing", action="store_true", help="include wall_time in the report")
    v.add_argument("--json", metavar="PATH", help="also write the report here")

    s = sub.add_parser("suite", help="run the default grid (or a parameter file)")
    s.add_argument("--filter", nargs="+", metavar="CHECK", help="only these check ids")
    s.add_argument("--params", metavar="PATH", help="JSON list of {check, params, expected}")
    s.add_argument("--json", metavar="PATH", help="write the full report here")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timing", action="store_true")

    pa = sub.add_parser("partition", help="partition combinatorics report")
    pa.add_argument("--p", type=_prime, required=True)
    pa.add_argument("--lambda", dest="lam", required=True)
    return ap


def _write(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_apply(args: argparse.Namespace) -> int:
    f = parse_polynomial(args.poly, args.p, args.nvars)
    ops = parse_expression(args.op)
    print(format_polynomial(apply_expression(ops, f, args.method)))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    params = {k: getattr(args, k) for k in ("p", "n", "b", "r", "u", "v", "s") if getattr(args, k) is not None}
    if args.lam is not None:
        params["lambda"] = args.lam
    for k, val in args.param:
        params[k] = _coerce(val)
    if args.unbounded:
        params["unbounded"] = True
    report = run_check(CheckSpec.make(args.check, args.expected, **params), timing=args.timing)
    text = dumps({"schema": 1, **report})
    sys.stdout.write(text)
    _write(args.json, text)
    return EXIT_FAIL if report["status"] == "fail" else EXIT_OK


def cmd_suite(args: argparse.Namespace) -> int:
    if args.params:
        specs = load_specs(args.params)
        if args.filter:
            specs = [s for s in specs if s.check_id in args.filter]
    else:
        specs = default_grid(args.filter)
    result = run_suite(specs, jobs=max(args.jobs, 1), timing=args.timing)
    for rep in result["reports"]:
        params = " ".join(f"{k}={json.dumps(v, separators=(',', ':'))}" for k, v in sorted(rep["parameters"].items()))
        extra = f" ({rep['reason']})" if rep["status"] == "skip" else ""
        if rep["status"] == "conjecture":
            extra = f" ({rep['conjecture']})"
        print(f"{rep['status'].upper():10s} {rep['check_id']} {params}{extra}")
    summ = result["summary"]
    print("summary: " + ", ".join(f"{k}={summ[k]}" for k in ("pass", "fail", "skip", "conjecture")))
    _write(args.json, dumps(result))
    return exit_code(result)


def cmd_partition(args: argparse.Namespace) -> int:
    lam = Partition.parse(args.lam, args.p)
    sys.stdout.write(dumps({"schema": 1, **partition_report(lam)}))
    return EXIT_OK


COMMANDS = {"apply": cmd_apply, "verify": cmd_verify, "suite": cmd_suite, "partition": cmd_partition}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ExpressionError, PolynomialError, PartitionError, PrimeError, ValueError) as e:
        print(f"steenrod-fp: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
