"""Command-line entry point.

    corrcancel run <file> [--seed N] [--json out.json] [--timing]
    corrcancel verify <suite|all> [--field Q|F7] [--seed N] [--json out.json]

Exit codes: 0 pass, 1 verification failure, 2 usage or parse error,
3 computation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..algebra.field import FieldSpec
from ..errors import CorrError, ScenarioError
from ..suites import SUITES, run_suite
from . import runner
from .scenario import parse_scenario

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="corrcancel", description="Exact computations with finite correspondences.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)
    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("file")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--json", dest="json_out", metavar="OUT")
    r.add_argument("--timing", action="store_true", help="include per-command seconds in JSON")
    v = sub.add_parser("verify", help="run a built-in verification suite")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("--field", default="Q")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", dest="json_out", metavar="OUT")
    return p


def _write_json(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_run(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"corrcancel: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        scenario = parse_scenario(text)
    except ScenarioError as exc:
        print(f"{args.file}:{exc.line}:{exc.column}: {exc.code}: {exc.bare_message}", file=sys.stderr)
        return EXIT_USAGE
    reports = runner.run(scenario, args.seed)
    for rep in reports:
        print(rep.text())
    code = runner.exit_code(reports)
    if args.json_out:
        _write_json(args.json_out, runner.dumps(runner.to_document(scenario, reports, args.seed, args.timing)))
    return code


def cmd_verify(args) -> int:
    try:
        field = FieldSpec.parse(args.field)
    except CorrError as exc:
        print(f"corrcancel: {exc}", file=sys.stderr)
        return EXIT_USAGE
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    checks = []
    try:
        for name in names:
            checks.extend(run_suite(name, field, args.seed))
    except Exception as exc:  # noqa: BLE001
        print(f"corrcancel: internal error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed over {field}")
    if args.json_out:
        doc = {
            "schema_version": runner.SCHEMA_VERSION,
            "field": str(field),
            "seed": args.seed,
            "suites": names,
            "checks": [c.to_json() for c in checks],
            "summary": {"checks": len(checks), "failures": len(failed)},
        }
        _write_json(args.json_out, runner.dumps(doc))
    return EXIT_FAIL if failed else EXIT_PASS


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_verify(args)
    except KeyboardInterrupt:
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
