"""Text grammar for scalars, forms, charts and lcs structure files.

Expression grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/' | '^') unary)*      # '^' here is the wedge
    unary  := ('-' | '+') unary | power
    power  := atom ('^' ['-'] INT)?                  # '^' before an integer is a power
    atom   := INT | IDENT | IDENT '(' expr ')' | '(' expr ')'

An identifier names a coordinate or parameter; ``dX`` names the differential
of coordinate ``X``; ``sin(c)``/``cos(c)`` need an angular coordinate ``c``.

Chart files hold ``coord <name> [angular|collar]`` and ``param <name>`` lines;
structure files hold ``omega = <form>`` and ``theta = <form>`` lines.  ``#``
starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .errors import DivisionByZero, ParseError
from .exterior import Chart, DifferentialForm
from .scalar import ANGULAR, CARTESIAN, COLLAR, CoordinateSymbol, ScalarExpr, ScalarRing, scalar_ring

__all__ = [
    "Node",
    "parse_ast",
    "parse_scalar",
    "parse_form",
    "parse_chart",
    "parse_structure",
    "format_structure",
]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)
_FUNCS = ("sin", "cos")


def _byte_offset(text: str, char_pos: int) -> int:
    return len(text[:char_pos].encode("utf-8"))


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "ident" | "op" | "end"
    value: str
    pos: int


@dataclass(frozen=True)
class Node:
    op: str
    args: tuple
    pos: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(Token("int", m.group(1), start))
        elif m.group(2):
            tokens.append(Token("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", _byte_offset(text, start))
            tokens.append(Token("op", ch, start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, _byte_offset(self.text, tok.pos))

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, value: str) -> Token | None:
        tok = self.peek()
        if tok.kind == "op" and tok.value == value:
            return self.take()
        return None

    def expect(self, value: str) -> Token:
        tok = self.accept(value)
        if tok is None:
            self.error(f"expected {value!r}")
        return tok

    def parse(self) -> Node:
        if self.peek().kind == "end":
            self.error("empty expression")
        node = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected {self.peek().value!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            tok = self.accept("+") or self.accept("-")
            if tok is None:
                return node
            node = Node("add" if tok.value == "+" else "sub", (node, self.term()), tok.pos)

    def term(self) -> Node:
        node = self.unary()
        while True:
            tok = self.accept("*") or self.accept("/") or self.accept("^")
            if tok is None:
                return node
            op = {"*": "mul", "/": "div", "^": "wedge"}[tok.value]
            node = Node(op, (node, self.unary()), tok.pos)

    def unary(self) -> Node:
        tok = self.accept("-")
        if tok:
            return Node("neg", (self.unary(),), tok.pos)
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.value == "^":
            nxt, nxt2 = self.peek(1), self.peek(2)
            if nxt.kind == "int":
                self.take()
                self.take()
                return Node("pow", (node, int(nxt.value)), tok.pos)
            if nxt.kind == "op" and nxt.value == "-" and nxt2.kind == "int":
                self.take()
                self.take()
                self.take()
                return Node("pow", (node, -int(nxt2.value)), tok.pos)
        return node

    def atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "int":
            self.take()
            return Node("int", (int(tok.value),), tok.pos)
        if tok.kind == "ident":
            self.take()
            if self.peek().kind == "op" and self.peek().value == "(":
                if tok.value not in _FUNCS:
                    self.error(f"unknown function {tok.value!r}", tok)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Node("call", (tok.value, arg), tok.pos)
            return Node("ident", (tok.value,), tok.pos)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected a number, identifier or '('" if tok.kind != "end" else "unexpected end of input")


def parse_ast(text: str) -> Node:
    return _Parser(text).parse()


def _identifiers(node: Node, out: list[tuple[str, bool]]) -> None:
    if node.op == "ident":
        out.append((node.args[0], False))
    elif node.op == "call":
        arg = node.args[1]
        if arg.op == "ident":
            out.append((arg.args[0], True))
        else:
            _identifiers(arg, out)
    elif node.op != "int":
        for a in node.args:
            if isinstance(a, Node):
                _identifiers(a, out)


class _Evaluator:
    """Folds an AST into any algebra given leaf constructors."""

    def __init__(self, text: str, leaf: Callable[[Node], object], call: Callable[[Node], object],
                 divide: Callable[[object, object, Node], object],
                 power: Callable[[object, int, Node], object],
                 wedge: Callable[[object, object], object]):
        self.text = text
        self.leaf = leaf
        self.call = call
        self.divide = divide
        self.power = power
        self.wedge = wedge

    def error(self, msg: str, node: Node):
        raise ParseError(msg, _byte_offset(self.text, node.pos))

    def __call__(self, node: Node):
        op = node.op
        if op in ("int", "ident"):
            return self.leaf(node)
        if op == "call":
            return self.call(node)
        if op == "neg":
            return -self(node.args[0])
        a = self(node.args[0])
        if op == "pow":
            return self.power(a, node.args[1], node)
        b = self(node.args[1])
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if op == "wedge":
            return self.wedge(a, b)
        if op == "div":
            return self.divide(a, b, node)
        raise AssertionError(op)


def _infer_ring(node: Node) -> ScalarRing:
    seen: dict[str, bool] = {}
    idents: list[tuple[str, bool]] = []
    _identifiers(node, idents)
    for name, angular in idents:
        seen[name] = seen.get(name, False) or angular
    coords = tuple(CoordinateSymbol(n, ANGULAR if a else CARTESIAN) for n, a in seen.items())
    return scalar_ring(coords, ())


def parse_scalar(text: str, ring: ScalarRing | None = None) -> ScalarExpr:
    """Parse a scalar expression.

    Without ``ring``, one is built from the identifiers in order of first
    appearance; identifiers used inside ``sin``/``cos`` become angular.
    """
    node = parse_ast(text)
    if ring is None:
        ring = _infer_ring(node)

    def leaf(n: Node):
        if n.op == "int":
            return ring.const(n.args[0])
        name = n.args[0]
        if not ring.has_symbol(name) or name.startswith(("sin(", "cos(")):
            ev.error(f"unknown symbol {name!r}", n)
        return ring.symbol(name)

    def call(n: Node):
        fname, arg = n.args
        if arg.op != "ident" or arg.args[0] not in ring.angular_pairs:
            ev.error(f"{fname}() takes an angular coordinate", n)
        return ring.sin(arg.args[0]) if fname == "sin" else ring.cos(arg.args[0])

    def divide(a, b, n):
        return a / b

    def power(a, e, n):
        return a ** e

    def wedge(a, b):
        ev.error("'^' between scalars must be followed by an integer exponent", node)

    ev = _Evaluator(text, leaf, call, divide, power, wedge)
    return ev(node)


def parse_form(text: str, chart: Chart) -> DifferentialForm:
    node = parse_ast(text)
    ring = chart.ring
    names = set(chart.names)

    def leaf(n: Node):
        if n.op == "int":
            return chart.function(n.args[0])
        name = n.args[0]
        if ring.has_symbol(name):
            return chart.function(ring.symbol(name))
        if name.startswith("d") and name[1:] in names:
            return chart.d(name[1:])
        ev.error(f"unknown symbol {name!r}", n)

    def call(n: Node):
        fname, arg = n.args
        if arg.op != "ident" or arg.args[0] not in ring.angular_pairs:
            ev.error(f"{fname}() takes an angular coordinate", n)
        f = ring.sin(arg.args[0]) if fname == "sin" else ring.cos(arg.args[0])
        return chart.function(f)

    def scalar_of(form: DifferentialForm, n: Node) -> ScalarExpr:
        if form.degree != 0:
            ev.error("expected a scalar (0-form) here", n)
        return form.coefficient()

    def divide(a, b, n):
        s = scalar_of(b, n.args[1])
        if not s:
            raise DivisionByZero(f"division by zero at byte {_byte_offset(text, n.pos)}")
        return a.scale(s.inverse())

    def power(a, e, n):
        return chart.function(scalar_of(a, n.args[0]) ** e)

    ev = _Evaluator(text, leaf, call, divide, power, lambda a, b: a ^ b)
    return ev(node)


def _lines(text: str):
    """Yield (byte offset of line start, stripped content) for non-blank lines."""
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.split("#", 1)[0]
        if line.strip():
            lead = len(line) - len(line.lstrip())
            yield offset + _byte_offset(line, lead), line.strip()
        offset += len(raw.encode("utf-8"))


def parse_chart(text: str) -> Chart:
    coords: list[CoordinateSymbol] = []
    params: list[str] = []
    for offset, line in _lines(text):
        parts = line.split()
        if parts[0] == "coord" and len(parts) in (2, 3):
            kind = parts[2] if len(parts) == 3 else CARTESIAN
            if kind not in (ANGULAR, COLLAR, CARTESIAN) or not parts[1].isidentifier():
                raise ParseError(f"bad coordinate declaration {line!r}", offset)
            coords.append(CoordinateSymbol(parts[1], kind))
        elif parts[0] == "param" and len(parts) == 2 and parts[1].isidentifier():
            params.append(parts[1])
        else:
            raise ParseError(f"unrecognised chart line {line!r}", offset)
    if not coords:
        raise ParseError("chart declares no coordinates", 0)
    try:
        return Chart(tuple(coords), tuple(params))
    except ValueError as exc:
        raise ParseError(str(exc), 0) from None


def _shift(exc: ParseError, by: int) -> ParseError:
    msg = str(exc).rsplit(" (at byte", 1)[0]
    return ParseError(msg, exc.offset + by)


def parse_structure(text: str, chart: Chart) -> tuple[DifferentialForm, DifferentialForm]:
    """Parse ``omega = ...`` and ``theta = ...`` lines (theta defaults to 0)."""
    found: dict[str, DifferentialForm] = {}
    for offset, line in _lines(text):
        key, eq, rhs = line.partition("=")
        key = key.strip()
        if not eq or key not in ("omega", "theta"):
            raise ParseError(f"expected 'omega = ...' or 'theta = ...', got {line!r}", offset)
        start = len(line) - len(rhs)
        try:
            found[key] = parse_form(rhs, chart)
        except ParseError as exc:
            raise _shift(exc, offset + _byte_offset(line, start)) from None
    if "omega" not in found:
        raise ParseError("structure file has no omega line", 0)
    return found["omega"], found.get("theta", chart.zero())


def format_structure(omega: DifferentialForm, theta: DifferentialForm) -> str:
    return f"omega = {omega}\ntheta = {theta}\n"
