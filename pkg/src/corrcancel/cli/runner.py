"""Execute a parsed scenario, producing one report per command."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field
from typing import Any

from ..cancellation import e_correspondence, gm_tensor, homotopy, motivic_class, newton_bound, rho
from ..correspondences import Correspondence, compose, graph, identity, tensor, transpose
from ..cycles import rebase
from ..divisors import CartierDivisor, intersect
from ..errors import CorrError, InvalidMorphism
from ..suites import SUITES, run_suite
from .scenario import Command, CorrDef, CorrExpr, Scenario

SCHEMA_VERSION = 1


class DependencyError(CorrError):
    code = "DEPENDENCY_ERROR"


@dataclass
class Report:
    index: int
    kind: str
    command: str
    line: int
    outcome: str  # value | pass | fail | error
    value: Any = None
    code: str | None = None
    message: str | None = None
    cycles: dict[str, str] = dc_field(default_factory=dict)
    checks: list[dict] = dc_field(default_factory=list)
    expected: str | None = None
    seconds: float | None = None

    @property
    def ok(self) -> bool:
        return self.outcome in ("value", "pass")

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "index": self.index,
            "kind": self.kind,
            "command": self.command,
            "line": self.line,
            "outcome": self.outcome,
            "value": self.value,
            "code": self.code,
            "message": self.message,
            "cycles": dict(sorted(self.cycles.items())),
            "checks": self.checks,
            "expected": self.expected,
        }
        if timing:
            out["seconds"] = self.seconds
        return out

    def text(self) -> str:
        head = f"[{self.index}] {self.command}"
        if self.outcome == "error":
            return f"{head}\n    error {self.code}: {self.message}"
        body = f"    {self.outcome}"
        if self.value is not None:
            body += f": {self.value}"
        if self.expected is not None:
            body += f"  (expected {self.expected})"
        if self.message:
            body += f"  [{self.message}]"
        lines = [head, body]
        for c in self.checks:
            if not c["passed"]:
                lines.append(f"    FAIL {c['name']}: lhs={c['lhs']} rhs={c['rhs']}" + (f" error={c['error']}" if c.get("error") else ""))
        return "\n".join(lines)


def _error_code(exc: BaseException) -> str:
    if isinstance(exc, CorrError):
        return exc.code
    if isinstance(exc, (ValueError, KeyError, TypeError)):
        return "INVALID_ARGUMENT"
    return "INTERNAL_ERROR"


class Runner:
    def __init__(self, scenario: Scenario, seed: int = 0):
        self.sc = scenario
        self.seed = seed
        self.corrs: dict[str, Correspondence] = {}
        self.failed: dict[str, str] = {}

    # correspondences
    def evaluate(self, e: CorrExpr) -> Correspondence:
        f = e.form
        a = e.args
        if f == "ref":
            name = a[0]
            if name in self.failed:
                raise DependencyError(f"{name} failed to build: {self.failed[name]}")
            return self.corrs[name]
        if f == "literal":
            src, tgt, items = a
            out = Correspondence.zero(src, tgt)
            for kind, gens, mult, _, _ in items:
                if kind == "component":
                    out = out + Correspondence.from_components(src, tgt, [(list(gens), mult)])
                else:
                    out = out + Correspondence.from_subscheme(src, tgt, list(gens), mult)
            return out
        if f == "graph":
            return graph(a[0])
        if f == "transpose":
            return transpose(a[0])
        if f == "identity":
            return identity(a[0])
        if f == "e":
            return e_correspondence(a[0])
        if f == "gm":
            return gm_tensor(self.evaluate(a[0]))
        if f == "compose":
            return compose(self.evaluate(a[0]), self.evaluate(a[1]))
        if f == "tensor":
            return tensor(self.evaluate(a[0]), self.evaluate(a[1]))
        if f == "sum":
            total = None
            for k, sub in a:
                c = k * self.evaluate(sub)
                if total is not None and (total.source, total.target) != (c.source, c.target):
                    raise InvalidMorphism(f"cannot add {total.source}->{total.target} and {c.source}->{c.target}")
                total = c if total is None else total + c
            return total
        raise ValueError(f"unknown correspondence form {f}")  # pragma: no cover

    def define(self, d: CorrDef) -> Report | None:
        try:
            c = self.evaluate(d.expr)
            if d.source is not None and (c.source, c.target) != (d.source, d.target):
                raise InvalidMorphism(f"{d.name} has type {c.source} -> {c.target}, declared {d.source} -> {d.target}")
            self.corrs[d.name] = c
            return None
        except Exception as exc:  # noqa: BLE001 - every failure becomes a report
            self.failed[d.name] = _error_code(exc)
            return Report(-1, "definition", d.text, d.line, "error", code=_error_code(exc), message=str(exc))

    # commands
    def execute(self, cmd: Command) -> Report:
        rep = Report(cmd.index, "command", cmd.text, cmd.line, "value")
        start = time.perf_counter()
        try:
            self._dispatch(cmd, rep)
        except Exception as exc:  # noqa: BLE001
            rep.outcome, rep.code, rep.message = "error", _error_code(exc), str(exc)
            rep.value = None
        rep.seconds = time.perf_counter() - start
        self._apply_expectation(cmd, rep)
        return rep

    def _dispatch(self, cmd: Command, rep: Report):
        v, args = cmd.verb, cmd.args
        if v == "verify":
            names = list(SUITES) if args["suite"] == "all" else [args["suite"]]
            checks = []
            for name in names:
                checks.extend(run_suite(name, self.sc.field, self.seed))
            rep.checks = [c.to_json() for c in checks]
            passed = sum(c.passed for c in checks)
            rep.value = f"{passed}/{len(checks)}"
            rep.outcome = "pass" if passed == len(checks) else "fail"
            return
        if v == "compose":
            c = compose(self.evaluate(args["left"]), self.evaluate(args["right"]))
            rep.value = str(c)
            rep.cycles["result"] = str(c.cycle)
            return
        Z = self.evaluate(args["corr"])
        rep.cycles["input"] = str(Z.cycle)
        if v == "show":
            rep.value = str(Z)
        elif v == "degree":
            rep.value = Z.degree()
        elif v == "class":
            rep.value = motivic_class(Z)
        elif v == "newton":
            rep.value = newton_bound(Z)
        elif v == "rho":
            r = rho(Z, args["n"])
            rep.value = str(r.correspondence)
            rep.cycles["intersection"] = str(r.intersection)
            rep.cycles["result"] = str(r.correspondence.cycle)
            rep.message = f"n = {r.n} ({r.selected_by})"
            if r.evidence.boundary is False:
                rep.outcome = "fail"
                rep.message += "; n is below the boundary bound, so the result is not certified"
        elif v == "homotopy":
            h = homotopy(Z, args["n"], args["m"])
            rep.value = str(h.correspondence)
            rep.cycles["result"] = str(h.correspondence.cycle)
            rep.cycles["at0"] = str(h.at0)
            rep.cycles["at1"] = str(h.at1)
            if not h.consistent:
                rep.outcome = "fail"
                rep.message = "endpoints differ from the cancellation operator"
        elif v == "intersect":
            dd = self.sc.divisors[args["divisor"]]
            D = CartierDivisor(dd.ambient, dd.numerator, dd.denominator)
            # the correspondence as an absolute cycle on X×Y
            C = intersect(rebase(Z.cycle, ()), D)
            rep.value = str(C)
            rep.cycles["result"] = str(C)
        else:  # pragma: no cover - the parser only emits known verbs
            raise ValueError(f"unknown command {v}")

    @staticmethod
    def _apply_expectation(cmd: Command, rep: Report):
        e = cmd.expect
        if e is None:
            return
        if e.must_fail:
            rep.expected = "failure" + (f" {e.code}" if e.code else "")
            failed = rep.outcome == "fail" or (rep.outcome == "error" and (e.code is None or rep.code == e.code))
            note = f"got {rep.outcome}" + (f" {rep.code}" if rep.code else "")
            rep.outcome = "pass" if failed else "fail"
            rep.message = f"{note}; {rep.message}" if rep.message else note
            return
        rep.expected = e.value
        if rep.outcome == "error":
            return
        if rep.outcome == "fail":
            return
        rep.outcome = "pass" if str(rep.value) == e.value else "fail"


def run(scenario: Scenario, seed: int = 0) -> list[Report]:
    """Run definitions and commands in order; errors become reports, never exceptions."""
    r = Runner(scenario, seed)
    out = []
    for step in scenario.steps:
        if isinstance(step, CorrDef):
            rep = r.define(step)
            if rep is not None:
                out.append(rep)
        else:
            out.append(r.execute(step))
    return out


def exit_code(reports: list[Report]) -> int:
    if any(r.outcome == "error" for r in reports):
        return 3
    if any(r.outcome == "fail" for r in reports):
        return 1
    return 0


def to_document(scenario: Scenario, reports: list[Report], seed: int, timing: bool = False) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "field": str(scenario.field),
        "seed": seed,
        "reports": [r.to_json(timing) for r in reports],
        "summary": {
            "commands": sum(r.kind == "command" for r in reports),
            "failures": sum(r.outcome == "fail" for r in reports),
            "errors": sum(r.outcome == "error" for r in reports),
            "exit_code": exit_code(reports),
        },
    }


def dumps(document: dict) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
