"""Closed-form expression trees for surface components.

Grammar (infix, no implicit multiplication, function application always
parenthesized):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' exponent)?          # right-associative
    exponent:= '-'? integer-literal | unary  # literal ints stay integer powers
    atom    := number | 'pi' | 'e' | variable | func '(' expr ')' | '(' expr ')'

Unary minus binds tighter than '*' and '/' but looser than '^', so
``-u^2 == -(u^2)``.  A '^' with an integer-literal exponent becomes an
integer-power node evaluated by repeated multiplication (safe for negative
bases); any other exponent is rewritten at parse time to
``exp(exponent * log(base))``.

Trees evaluate over any scalar-like algebra: plain floats or jets.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import EvalDomainError, ExprSyntaxError, UnknownIdentifierError
from .jets import Jet2, apply_analytic, int_pow
from .config import DEFAULT_TOL

FUNCTIONS = ("sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "atan")
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Expr:
    """Base class for expression nodes (immutable after parsing)."""

    def __str__(self) -> str:
        return expr_to_string(self)


@dataclass(frozen=True)
class Constant(Expr):
    value: float
    name: str | None = None  # set for named constants pi, e


@dataclass(frozen=True)
class Variable(Expr):
    name: str


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # 'neg' or a function name
    arg: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str  # add | sub | mul | div
    left: Expr
    right: Expr


@dataclass(frozen=True)
class IntPow(Expr):
    base: Expr
    exponent: int


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, text: str, variables):
        self.text = text
        self.variables = tuple(variables)
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                where = len(text) - len(stripped)
                raise ExprSyntaxError(f"unexpected character {text[where]!r}", where)
            pos = m.end()
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
        self.tokens.append(("eof", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def pop(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, off = self.peek()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}, found {val or 'end of input'!r}", off)
        self.pop()

    # grammar levels -------------------------------------------------------

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, off = self.peek()
        if kind != "eof":
            raise ExprSyntaxError(f"unexpected trailing input {val!r}", off)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.pop()
                right = self.term()
                left = Binary("add" if val == "+" else "sub", left, right)
            else:
                return left

    def term(self) -> Expr:
        left = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.pop()
                right = self.unary()
                left = Binary("mul" if val == "*" else "div", left, right)
            else:
                return left

    def unary(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.pop()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.pop()
            exponent, literal = self.exponent()
            if literal is not None:
                return IntPow(base, literal)
            # general exponent: rewrite as exp(exponent * log(base))
            return Unary("exp", Binary("mul", exponent, Unary("log", base)))
        return base

    def exponent(self):
        """Parse the right side of '^'; returns (expr, int_literal_or_None)."""
        kind, val, _ = self.peek()
        offset = 0
        if kind == "op" and val == "-":
            # '-' immediately followed by a bare integer literal keeps
            # integer-power semantics (u^-2)
            kind2, val2, _ = self.tokens[self.i + 1]
            if kind2 == "num" and _is_integer_literal(val2):
                kind, val, offset = kind2, val2, 1
        if kind == "num" and _is_integer_literal(val):
            nkind, nval, _ = self.tokens[self.i + offset + 1]
            if not (nkind == "op" and nval == "^"):
                # a bare literal exponent (not itself a power expression)
                for _ in range(offset + 1):
                    self.pop()
                n = int(val)
                return None, -n if offset else n
        # fall back to the full unary level (right-associative chain)
        return self.unary(), None

    def atom(self) -> Expr:
        kind, val, off = self.pop()
        if kind == "num":
            return Constant(float(val))
        if kind == "ident":
            if val in CONSTANTS:
                return Constant(CONSTANTS[val], name=val)
            if val in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Unary(val, arg)
            if val in self.variables:
                return Variable(val)
            raise UnknownIdentifierError(val, off, self.variables + tuple(CONSTANTS) + FUNCTIONS)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ExprSyntaxError(f"unexpected token {val or 'end of input'!r}", off)


def _is_integer_literal(text: str) -> bool:
    return text.isdigit()


def parse_expression(text: str, variables=("u", "v")) -> Expr:
    """Parse an infix expression over the given variables."""
    return _Parser(text, variables).parse()


# ---------------------------------------------------------------------------
# evaluation over floats or jets


def _apply_function(name: str, value):
    if isinstance(value, Jet2):
        return apply_analytic(name, value)
    # same numpy kernels as the jet series use, so plain-float evaluation
    # agrees with order-0 jets bit for bit
    import numpy as np

    x = float(value)
    if name in ("sqrt", "log") and x <= DEFAULT_TOL.zero_rel:
        raise EvalDomainError(f"{name} of non-positive value {x!r}")
    fn = np.arctan if name == "atan" else getattr(np, name)
    return float(fn(x))


def _int_pow_value(value, n: int):
    if isinstance(value, Jet2):
        return int_pow(value, n)
    # same square-and-multiply sequence as the jet path, so that order-0 jets
    # and plain floats agree bit for bit
    if n == 0:
        return 1.0
    invert = n < 0
    n = abs(n)
    result = None
    square = float(value)
    while n:
        if n & 1:
            result = square if result is None else result * square
        n >>= 1
        if n:
            square = square * square
    if invert:
        if abs(result) <= DEFAULT_TOL.zero_rel:
            raise EvalDomainError(f"division by (numerically) zero value {result!r}")
        return 1.0 / result
    return result


def eval_expression(e: Expr, bindings: Mapping[str, Union[float, Jet2]]):
    """Evaluate an expression tree over floats or jets.

    Domain errors (log/sqrt of non-positive values, division by a value whose
    constant term is below the zero threshold) are re-raised with the
    offending subexpression attached.
    """
    if isinstance(e, Constant):
        sample = next(iter(bindings.values()), None)
        if isinstance(sample, Jet2):
            return sample.constant_like(e.value)
        return e.value
    if isinstance(e, Variable):
        try:
            return bindings[e.name]
        except KeyError:
            raise UnknownIdentifierError(e.name, 0, tuple(bindings)) from None
    if isinstance(e, Unary):
        arg = eval_expression(e.arg, bindings)
        if e.op == "neg":
            return -arg
        try:
            return _apply_function(e.op, arg)
        except EvalDomainError as err:
            raise EvalDomainError(str(err), node=expr_to_string(e)) from None
    if isinstance(e, IntPow):
        base = eval_expression(e.base, bindings)
        try:
            return _int_pow_value(base, e.exponent)
        except EvalDomainError as err:
            raise EvalDomainError(str(err), node=expr_to_string(e)) from None
    if isinstance(e, Binary):
        left = eval_expression(e.left, bindings)
        right = eval_expression(e.right, bindings)
        if e.op == "add":
            return left + right
        if e.op == "sub":
            return left - right
        if e.op == "mul":
            return left * right
        if e.op == "div":
            if not isinstance(left, Jet2) and not isinstance(right, Jet2):
                if abs(right) <= DEFAULT_TOL.zero_rel:
                    raise EvalDomainError(
                        f"division by (numerically) zero value {right!r}",
                        node=expr_to_string(e),
                    )
                return left / right
            if not isinstance(right, Jet2) and isinstance(left, Jet2):
                right = left.constant_like(right)
            elif not isinstance(left, Jet2):
                left = right.constant_like(left)
            try:
                return left / right
            except EvalDomainError as err:
                raise EvalDomainError(str(err), node=expr_to_string(e)) from None
    raise TypeError(f"not an expression node: {e!r}")


def expr_variables(e: Expr) -> set[str]:
    if isinstance(e, Variable):
        return {e.name}
    if isinstance(e, Unary):
        return expr_variables(e.arg)
    if isinstance(e, IntPow):
        return expr_variables(e.base)
    if isinstance(e, Binary):
        return expr_variables(e.left) | expr_variables(e.right)
    return set()


# ---------------------------------------------------------------------------
# printing (minimal parentheses; print -> parse -> print is a fixed point)

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_NEG, _LEVEL_POW, _LEVEL_ATOM = 0, 1, 2, 3, 4


def _fmt_number(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _to_string(e: Expr) -> tuple[str, int]:
    if isinstance(e, Constant):
        if e.name is not None:
            return e.name, _LEVEL_ATOM
        if e.value < 0:
            return _fmt_number(-e.value), -1  # printed behind a neg node only
        return _fmt_number(e.value), _LEVEL_ATOM
    if isinstance(e, Variable):
        return e.name, _LEVEL_ATOM
    if isinstance(e, Unary):
        if e.op == "neg":
            inner, level = _to_string(e.arg)
            if level < _LEVEL_NEG:
                inner = f"({inner})"
            return f"-{inner}", _LEVEL_NEG
        inner, _ = _to_string(e.arg)
        return f"{e.op}({inner})", _LEVEL_ATOM
    if isinstance(e, IntPow):
        base, level = _to_string(e.base)
        if level < _LEVEL_ATOM:
            base = f"({base})"
        return f"{base}^{e.exponent}", _LEVEL_POW
    if isinstance(e, Binary):
        ls, ll = _to_string(e.left)
        rs, rl = _to_string(e.right)
        if e.op in ("add", "sub"):
            sym = "+" if e.op == "add" else "-"
            if ll < _LEVEL_ADD:
                ls = f"({ls})"
            if rl < (_LEVEL_ADD if e.op == "add" else _LEVEL_MUL):
                rs = f"({rs})"
            return f"{ls} {sym} {rs}", _LEVEL_ADD
        sym = "*" if e.op == "mul" else "/"
        if ll < _LEVEL_MUL:
            ls = f"({ls})"
        if rl < (_LEVEL_MUL if e.op == "mul" else _LEVEL_NEG):
            rs = f"({rs})"
        return f"{ls}{sym}{rs}", _LEVEL_MUL
    raise TypeError(f"not an expression node: {e!r}")


def expr_to_string(e: Expr) -> str:
    text, _ = _to_string(e)
    return text
