"""Command-line front end: ``lagsel solve | reopt | generate | verify``.

Exit codes: 0 success, 1 other precondition failure, 2 schema error,
3 size cap exceeded, 4 oracle contract or guarantee violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import as_fraction
from .errors import LagselError, OracleContractError, SchemaError, SizeCapExceeded
from .io import load_instance, load_reopt_instance, parse_instance, parse_reopt_instance, serialize_instance
from .problems.oracles import ORACLES
from .reference import KINDS, random_instance
from .report import (
    MODES,
    BatchSpec,
    run_reopt,
    run_solve,
    verification_passed,
    verify_batch,
    verify_reopt,
    verify_saved,
    verify_solve,
)

EXIT_OK, EXIT_OTHER, EXIT_SCHEMA, EXIT_SIZE_CAP, EXIT_CONTRACT = 0, 1, 2, 3, 4


def _rational(text):
    try:
        return as_fraction(text, "epsilon")
    except LagselError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def cmd_solve(args) -> int:
    loaded = load_instance(args.instance)
    report = run_solve(
        loaded.instance, args.mode, args.oracle, args.epsilon,
        seed=args.seed, from_file=loaded.has_epsilon,
    )
    code = EXIT_OK
    if args.verify:
        report.verification = verify_solve(loaded.instance, report)
        code = EXIT_OK if verification_passed(report.verification) else EXIT_CONTRACT
    _emit(report.to_json(), args.out)
    return code


def cmd_reopt(args) -> int:
    with open(args.instance, encoding="utf-8") as fh:
        text = fh.read()
    rinst = parse_reopt_instance(text)
    report = run_reopt(
        rinst, args.oracle, args.epsilon, budget_oracle=args.budget_oracle,
        seed=args.seed, from_file=parse_instance(text).has_epsilon,
    )
    code = EXIT_OK
    if args.verify:
        report.verification = verify_reopt(rinst, report)
        code = EXIT_OK if verification_passed(report.verification) else EXIT_CONTRACT
    _emit(report.to_json(), args.out)
    return code


def cmd_generate(args) -> int:
    inst = random_instance(
        args.kind, args.size, args.seed, "unit" if args.unit else "general",
        args.reopt, budgets=args.budgets, density=args.density,
    )
    _emit(serialize_instance(inst), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.batch:
        batch = BatchSpec(
            args.kind, args.size, args.batch, args.seed, args.mode, args.oracle,
            "unit" if args.unit else "general", args.budgets, args.epsilon, args.reopt,
        )
        summary = verify_batch(batch)
        _emit(_dump(summary), args.out)
        return EXIT_OK if summary["passed"] == summary["count"] else EXIT_CONTRACT
    if not (args.instance and args.report):
        raise SchemaError("verify needs INSTANCE and REPORT, or --batch N")
    with open(args.report, encoding="utf-8") as fh:
        try:
            saved = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}", "", exc.lineno) from None
    if not isinstance(saved, dict):
        raise SchemaError("report must be a JSON object")
    if saved.get("command") == "reopt":
        inst = load_reopt_instance(args.instance)
    else:
        inst = load_instance(args.instance).instance
    result = verify_saved(inst, saved)
    _emit(_dump(result), args.out)
    return EXIT_OK if verification_passed(result) else EXIT_CONTRACT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lagsel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--epsilon", type=_rational, default=None, help="error parameter, e.g. 1/100")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("solve", help="run a budgeted solver on an instance file")
    p.add_argument("instance")
    p.add_argument("--mode", choices=MODES, default="enumerate")
    p.add_argument("--oracle", choices=ORACLES, default="exact")
    p.add_argument("--verify", action="store_true", help="add brute-force OPT and ratio check")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reopt", help="budgeted reoptimization on an instance with transition costs")
    p.add_argument("instance")
    p.add_argument("--oracle", choices=ORACLES, default="exact")
    p.add_argument("--budget-oracle", choices=ORACLES, default=None)
    p.add_argument("--verify", action="store_true")
    common(p)
    p.set_defaults(func=cmd_reopt)

    def batch_args(p):
        p.add_argument("--kind", choices=KINDS, default="free")
        p.add_argument("--size", type=int, default=10)
        p.add_argument("--unit", action="store_true", help="unit weights")
        p.add_argument("--reopt", action="store_true", help="attach transition costs")
        p.add_argument("--budgets", type=int, default=1)

    p = sub.add_parser("generate", help="write a seeded random instance")
    batch_args(p)
    p.add_argument("--density", type=float, default=0.3, help="edge probability for graphs")
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a report against brute force, or a seeded batch")
    p.add_argument("instance", nargs="?")
    p.add_argument("report", nargs="?")
    p.add_argument("--batch", type=int, default=0, help="verify N seeded instances instead")
    p.add_argument("--mode", choices=MODES, default="enumerate")
    p.add_argument("--oracle", choices=ORACLES, default="exact")
    batch_args(p)
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except SizeCapExceeded as exc:
        print(f"size cap: {exc}", file=sys.stderr)
        return EXIT_SIZE_CAP
    except OracleContractError as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except LagselError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
