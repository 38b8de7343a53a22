"""Scenario files: lexer, parser and AST.

A scenario is a sequence of statements separated by newlines or ``;``.
Definitions (``field``, ``cell``, ``map``, ``corr``, ``divisor``) are checked
while parsing: names must be new, references must be defined earlier, and
polynomial literals are parsed against the right coordinates so that a
misspelled variable is reported with its line and column.  The grammar is
documented in docs/grammar.md.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Any

from ..algebra.field import FieldSpec
from ..algebra.polynomial import Polynomial
from ..errors import CorrError, DuplicateName, ScenarioError, ScenarioFieldMismatch, UnknownIdentifier
from ..spaces import Cell, CellMorphism, product
from ..suites import SUITES

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<str>"[^"\n]*")
  | (?P<badstr>"[^"\n]*)
  | (?P<name>expect-fail|[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>\d+)
  | (?P<op>->|--|[{}(),;:=*+\-/])
    """,
    re.VERBOSE,
)

VERBS = ("show", "degree", "class", "newton", "rho", "homotopy", "compose", "intersect", "verify")
CORR_FORMS = ("graph", "transpose", "identity", "e", "compose", "tensor", "gm")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int
    offset: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ScenarioError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "badstr":
            raise ScenarioError("unterminated string", line, col)
        if kind == "nl":
            out.append(Token("nl", "\n", line, col, pos))
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, col, pos))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1, pos))
    return out


# ---------------------------------------------------------------------------
# AST


@dataclass
class CorrExpr:
    """A correspondence expression; evaluated by the runner."""

    form: str
    args: tuple = ()
    line: int = 0
    column: int = 0


@dataclass
class CorrDef:
    name: str
    source: Cell | None
    target: Cell | None
    expr: CorrExpr
    line: int
    column: int
    text: str


@dataclass
class DivisorDef:
    name: str
    ambient: Cell
    numerator: Polynomial
    denominator: Polynomial
    line: int
    column: int


@dataclass
class Expectation:
    must_fail: bool
    value: str | None = None
    code: str | None = None


@dataclass
class Command:
    index: int
    verb: str
    args: dict[str, Any]
    text: str
    line: int
    column: int
    expect: Expectation | None = None


@dataclass
class Scenario:
    field: FieldSpec
    cells: dict[str, Cell] = dc_field(default_factory=dict)
    maps: dict[str, CellMorphism] = dc_field(default_factory=dict)
    corrs: dict[str, CorrDef] = dc_field(default_factory=dict)
    divisors: dict[str, DivisorDef] = dc_field(default_factory=dict)
    # definitions and commands in source order
    steps: list[CorrDef | Command] = dc_field(default_factory=list)

    @property
    def commands(self) -> list[Command]:
        return [s for s in self.steps if isinstance(s, Command)]


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.field: FieldSpec | None = None
        self.sc: Scenario | None = None
        self.names: dict[str, str] = {}

    # token helpers
    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def take(self) -> Token:
        tok = self.peek()
        self.i = min(self.i + 1, len(self.tokens) - 1)
        return tok

    def at(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind in ("op", "name") and tok.text in texts

    def error(self, message: str, tok: Token | None = None, cls=ScenarioError):
        tok = tok or self.peek()
        raise cls(message, tok.line, tok.column)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.describe(self.peek())}")
        return self.take()

    def describe(self, tok: Token) -> str:
        return {"eof": "end of input", "nl": "end of line"}.get(tok.kind, repr(tok.text))

    def name(self, what: str = "name") -> Token:
        tok = self.peek()
        if tok.kind != "name":
            self.error(f"expected {what}, found {self.describe(tok)}")
        return self.take()

    def integer(self) -> int:
        sign = 1
        if self.at("-"):
            self.take()
            sign = -1
        tok = self.peek()
        if tok.kind != "int":
            self.error(f"expected integer, found {self.describe(tok)}")
        self.take()
        return sign * int(tok.text)

    def string(self) -> Token:
        tok = self.peek()
        if tok.kind != "str":
            self.error(f"expected quoted polynomial, found {self.describe(tok)}")
        return self.take()

    def skip_newlines(self):
        while self.peek().kind == "nl" or self.at(";"):
            self.take()

    def end_statement(self):
        tok = self.peek()
        if tok.kind in ("nl", "eof") or self.at(";"):
            return
        self.error(f"unexpected {self.describe(tok)} after statement")

    # lookups
    def declare(self, tok: Token, kind: str):
        if tok.text in self.names:
            self.error(f"{tok.text!r} is already defined as a {self.names[tok.text]}", tok, DuplicateName)
        if tok.text in VERBS + CORR_FORMS + ("field", "cell", "map", "corr", "divisor", "pt", "Gm", "A1", "on", "mult"):
            self.error(f"{tok.text!r} is a reserved word", tok)
        self.names[tok.text] = kind

    def lookup(self, tok: Token, kind: str):
        table = {"cell": self.sc.cells, "map": self.sc.maps, "corr": self.sc.corrs, "divisor": self.sc.divisors}[kind]
        if tok.text not in table:
            if tok.text in self.names:
                self.error(f"{tok.text!r} is a {self.names[tok.text]}, expected a {kind}", tok)
            self.error(f"unknown {kind} {tok.text!r}", tok, UnknownIdentifier)
        return table[tok.text]

    def poly(self, tok: Token, cell: Cell) -> Polynomial:
        body = tok.text[1:-1]
        try:
            return cell.parse(body, line=tok.line, column=tok.column + 1)
        except ScenarioError:
            raise
        except (CorrError, ValueError, ZeroDivisionError, ArithmeticError) as exc:
            raise ScenarioError(f"bad polynomial {body!r}: {exc}", tok.line, tok.column) from None

    # grammar
    def parse(self) -> Scenario:
        self.skip_newlines()
        if not self.at("field"):
            self.error("a scenario starts with a field declaration")
        self.parse_field()
        self.sc = Scenario(self.field)
        while True:
            self.skip_newlines()
            tok = self.peek()
            if tok.kind == "eof":
                break
            start = self.i
            if self.at("field"):
                self.parse_field()
            elif self.at("cell"):
                self.parse_cell()
            elif self.at("map"):
                self.parse_map()
            elif self.at("corr"):
                self.sc.steps.append(self.parse_corr())
            elif self.at("divisor"):
                self.parse_divisor()
            elif tok.kind == "name" and tok.text in VERBS:
                self.sc.steps.append(self.parse_command())
            else:
                self.error(f"unknown statement {self.describe(tok)}")
            self.end_statement()
            if self.i == start:  # pragma: no cover - defensive
                self.take()
        return self.sc

    def parse_field(self):
        kw = self.take()
        tok = self.peek()
        text = ""
        # F7, Q, GF(7), F_7 come as a few tokens
        while tok.kind in ("name", "int") or (tok.kind == "op" and tok.text in "()"):
            text += self.take().text
            tok = self.peek()
        if not text:
            self.error("expected a field such as Q or F7")
        try:
            spec = FieldSpec.parse(text)
        except CorrError as exc:
            raise ScenarioFieldMismatch(str(exc), kw.line, kw.column) from None
        if self.field is not None and spec != self.field:
            raise ScenarioFieldMismatch(f"field {spec} conflicts with earlier field {self.field}", kw.line, kw.column)
        self.field = spec

    def cell_expr(self) -> Cell:
        cell = self.cell_factor()
        while self.at("*"):
            self.take()
            cell = product(cell, self.cell_factor())
        return cell

    def cell_factor(self) -> Cell:
        tok = self.name("cell")
        if tok.text == "pt":
            return Cell.point(self.field)
        if tok.text in ("Gm", "A1"):
            self.expect("(")
            names = [self.name("coordinate name")]
            while self.at(","):
                self.take()
                names.append(self.name("coordinate name"))
            self.expect(")")
            texts = [n.text for n in names]
            for j, n in enumerate(names):
                if n.text in texts[:j]:
                    self.error(f"coordinate {n.text!r} repeated", n, DuplicateName)
            ctor = Cell.gm if tok.text == "Gm" else Cell.a1
            return ctor(self.field, *texts)
        return self.lookup(tok, "cell")

    def parse_cell(self):
        self.take()
        name = self.name("cell name")
        self.declare(name, "cell")
        self.expect("=")
        cell = self.cell_expr()
        self.sc.cells[name.text] = cell

    def arrow(self) -> tuple[Cell, Cell]:
        self.expect(":")
        src = self.cell_expr()
        self.expect("->")
        tgt = self.cell_expr()
        return src, tgt

    def parse_map(self):
        self.take()
        name = self.name("map name")
        self.declare(name, "map")
        src, tgt = self.arrow()
        self.expect("=")
        brace = self.expect("{")
        images = []
        self.skip_newlines()
        while not self.at("}"):
            images.append(self.poly(self.string(), src))
            self.skip_newlines()
            if self.at(","):
                self.take()
                self.skip_newlines()
            elif not self.at("}"):
                self.error(f"expected ',' or '}}', found {self.describe(self.peek())}")
        self.take()
        try:
            self.sc.maps[name.text] = CellMorphism(src, tgt, tuple(images))
        except CorrError as exc:
            raise ScenarioError(f"invalid map {name.text}: {exc}", brace.line, brace.column) from None

    def parse_corr(self) -> CorrDef:
        kw = self.take()
        name = self.name("correspondence name")
        self.declare(name, "corr")
        src = tgt = None
        if self.at(":"):
            src, tgt = self.arrow()
        self.expect("=")
        if self.at("{"):
            if src is None:
                self.error("a component list needs a type  'corr c : X -> Y = { ... }'")
            expr = self.corr_literal(src, tgt)
        else:
            expr = self.corr_sum()
        d = CorrDef(name.text, src, tgt, expr, kw.line, kw.column, self.echo(kw))
        self.sc.corrs[name.text] = d
        return d

    def corr_literal(self, src: Cell, tgt: Cell) -> CorrExpr:
        brace = self.take()
        amb = product(src, tgt)
        items = []
        self.skip_newlines()
        while not self.at("}"):
            kw = self.name("'component' or 'subscheme'")
            if kw.text not in ("component", "subscheme"):
                self.error(f"expected 'component' or 'subscheme', found {kw.text!r}", kw)
            gens = [self.poly(self.string(), amb)]
            while self.at(","):
                self.take()
                gens.append(self.poly(self.string(), amb))
            mult = 1
            if self.at("mult"):
                self.take()
                mult = self.integer()
            items.append((kw.text, tuple(gens), mult, kw.line, kw.column))
            self.skip_newlines()
        self.take()
        return CorrExpr("literal", (src, tgt, tuple(items)), brace.line, brace.column)

    def corr_sum(self) -> CorrExpr:
        tok = self.peek()
        terms = [(1, self.corr_term())]
        while self.at("+", "-"):
            sign = 1 if self.take().text == "+" else -1
            k, e = self.corr_term()
            terms.append((sign, (k, e)))
        if len(terms) == 1 and terms[0][1][0] == 1:
            return terms[0][1][1]
        flat = tuple((s * k, e) for s, (k, e) in terms)
        return CorrExpr("sum", flat, tok.line, tok.column)

    def corr_term(self) -> tuple[int, CorrExpr]:
        k = 1
        if self.peek().kind == "int" or self.at("-"):
            k = self.integer()
            self.expect("*")
        return k, self.corr_atom()

    def corr_atom(self) -> CorrExpr:
        tok = self.name("correspondence")
        if tok.text in CORR_FORMS and self.at("("):
            self.take()
            if tok.text in ("graph", "transpose"):
                args = (self.lookup(self.name("map"), "map"),)
            elif tok.text in ("identity", "e"):
                args = (self.cell_expr(),)
            elif tok.text == "gm":
                args = (self.corr_sum(),)
            else:
                a = self.corr_sum()
                self.expect(",")
                args = (a, self.corr_sum())
            self.expect(")")
            return CorrExpr(tok.text, args, tok.line, tok.column)
        self.lookup(tok, "corr")
        return CorrExpr("ref", (tok.text,), tok.line, tok.column)

    def parse_divisor(self):
        kw = self.take()
        name = self.name("divisor name")
        self.declare(name, "divisor")
        self.expect("on")
        amb = self.cell_expr()
        self.expect("=")
        num = self.poly(self.string(), amb)
        den = amb.constant(1)
        if self.at("/"):
            self.take()
            den = self.poly(self.string(), amb)
        for p, what in ((num, "numerator"), (den, "denominator")):
            if not p:
                self.error(f"divisor {what} must be nonzero", kw)
            if not amb.is_regular(p):
                self.error(f"divisor {what} {p} is not regular on {amb}", kw)
        self.sc.divisors[name.text] = DivisorDef(name.text, amb, num, den, kw.line, kw.column)

    def parse_command(self) -> Command:
        verb = self.take()
        args: dict[str, Any] = {}
        if verb.text == "verify":
            tok = self.name("suite name")
            if tok.text not in SUITES and tok.text != "all":
                self.error(f"unknown suite {tok.text!r}; known: {', '.join(SUITES)}, all", tok, UnknownIdentifier)
            args["suite"] = tok.text
        elif verb.text in ("compose",):
            args["left"] = self.corr_sum()
            args["right"] = self.corr_sum()
        elif verb.text == "intersect":
            args["corr"] = self.corr_sum()
            args["divisor"] = self.lookup(self.name("divisor"), "divisor").name
        else:
            args["corr"] = self.corr_sum()
            if verb.text == "rho":
                args["n"] = None
                if self.at("--"):
                    self.take()
                    flag = self.name("flag")
                    if flag.text == "n":
                        args["n"] = self.integer()
                        if args["n"] < 0:
                            self.error("n must be nonnegative", flag)
                    elif flag.text != "auto":
                        self.error(f"unknown flag --{flag.text}; use --n N or --auto", flag)
            elif verb.text == "homotopy":
                args["n"] = self.integer()
                args["m"] = self.integer()
                if args["n"] < 0 or args["m"] < 0:
                    self.error("homotopy indices must be nonnegative", verb)
        expect = None
        if self.at("expect"):
            self.take()
            tok = self.peek()
            if tok.kind == "str":
                expect = Expectation(False, value=self.take().text[1:-1])
            else:
                expect = Expectation(False, value=str(self.integer()))
        elif self.at("expect-fail"):
            self.take()
            expect = Expectation(True)
            if self.peek().kind == "name":
                expect.code = self.take().text
        return Command(len(self.sc.commands), verb.text, args, self.echo(verb), verb.line, verb.column, expect)

    def echo(self, start: Token) -> str:
        end = self.tokens[self.i - 1]
        return " ".join(self.text[start.offset:end.offset + len(end.text)].split())


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario; raises a :class:`ScenarioError` with line and column on the first problem."""
    if not isinstance(text, str):
        raise ScenarioError("scenario must be text")
    parser = _Parser(text)
    try:
        return parser.parse()
    except ScenarioError:
        raise
    except RecursionError:
        raise ScenarioError("scenario nests too deeply") from None
    except (CorrError, ValueError, KeyError, ArithmeticError) as exc:
        tok = parser.peek()
        raise ScenarioError(f"invalid definition: {exc}", tok.line, tok.column) from None
