"""Closed-form scalar expressions over chart coordinates.

Expressions are parsed once into an immutable AST and evaluated to
second-order jets (value, gradient, Hessian) by forward-mode chain rules.
No numerical differencing happens here; every derivative is exact up to
floating-point rounding.

Grammar::

    expr  := term (('+'|'-') term)*
    term  := unary (('*'|'/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

``^`` binds tightest and is right-associative; unary minus binds looser
than ``^``. NUMBER is a decimal literal with optional exponent.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Expr",
    "Jet2",
    "ParseError",
    "EvalDomainError",
    "parse",
    "eval_jet2",
    "render",
    "FUNCTION_NAMES",
]


class ParseError(ValueError):
    """Malformed expression text.

    Attributes
    ----------
    kind : str
        One of ``'syntax'``, ``'unknown-identifier'``, ``'arity'``.
    offset : int
        0-based position in the source text where the problem starts.
    """

    def __init__(self, kind: str, offset: int, message: str):
        super().__init__(f"{message} (offset {offset})")
        self.kind = kind
        self.offset = offset
        self.message = message


class EvalDomainError(ArithmeticError):
    """Evaluation left the domain of some subexpression (log/sqrt of a
    non-positive argument, division by zero, overflow)."""

    def __init__(self, subtree: str, reason: str):
        super().__init__(f"{reason} in subexpression '{subtree}'")
        self.subtree = subtree
        self.reason = reason


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str
    index: int


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Pow, Call]


@dataclass(frozen=True)
class Expr:
    """Parsed expression tied to an ordered tuple of coordinate names."""

    root: Node
    coords: tuple[str, ...]

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and Hessian of a scalar field at a point.

    The Hessian is symmetric by construction: every rule below builds it
    from symmetric ingredients and symmetrized outer products.
    """

    value: float
    grad: np.ndarray
    hess: np.ndarray


# name -> (f, f', f'') on floats; log and sqrt additionally need arg > 0
_FUNCTIONS = {
    "sin": (math.sin, math.cos, lambda v: -math.sin(v)),
    "cos": (math.cos, lambda v: -math.sin(v), lambda v: -math.cos(v)),
    "tan": (math.tan, lambda v: 1.0 + math.tan(v) ** 2,
            lambda v: 2.0 * math.tan(v) * (1.0 + math.tan(v) ** 2)),
    "exp": (math.exp, math.exp, math.exp),
    "log": (math.log, lambda v: 1.0 / v, lambda v: -1.0 / (v * v)),
    "sqrt": (math.sqrt, lambda v: 0.5 / math.sqrt(v),
             lambda v: -0.25 / math.sqrt(v) ** 3),
    "sinh": (math.sinh, math.cosh, math.sinh),
    "cosh": (math.cosh, math.sinh, math.cosh),
    "tanh": (math.tanh, lambda v: 1.0 - math.tanh(v) ** 2,
             lambda v: -2.0 * math.tanh(v) * (1.0 - math.tanh(v) ** 2)),
}
_POSITIVE_DOMAIN = frozenset({"log", "sqrt"})
FUNCTION_NAMES = tuple(sorted(_FUNCTIONS))

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")
_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError("syntax", pos, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, coord_index):
        self.tokens = tokens
        self.i = 0
        self.coord_index = coord_index

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError("syntax", pos, f"expected {op!r}")
        return self.advance()

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(text, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(text, node, self.unary())
            else:
                return node

    def unary(self) -> Node:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return Pow(base, self.unary())
        return base

    def atom(self) -> Node:
        kind, text, pos = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            nkind, ntext, npos = self.peek()
            if nkind == "op" and ntext == "(":
                if text not in _FUNCTIONS:
                    raise ParseError("unknown-identifier", pos,
                                     f"unknown function {text!r}")
                self.advance()
                akind, atext, apos = self.peek()
                if akind == "op" and atext == ")":
                    raise ParseError("arity", apos,
                                     f"function {text!r} takes exactly one argument")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            if text in self.coord_index:
                return Var(text, self.coord_index[text])
            if text in _FUNCTIONS:
                raise ParseError("arity", pos,
                                 f"function {text!r} used without an argument")
            raise ParseError("unknown-identifier", pos,
                             f"unknown identifier {text!r}")
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError("syntax", pos, f"expected a value, found {text!r}"
                         if text else "unexpected end of input")


def parse(text: str, coords: Sequence[str]) -> Expr:
    """Parse ``text`` into an :class:`Expr` over the given coordinates.

    Raises
    ------
    ParseError
        On malformed input, identifiers outside ``coords``, or function
        misuse.
    ValueError
        If the coordinate list itself is invalid (empty, duplicated, not
        identifiers, or shadowing a function name).
    """
    names = tuple(coords)
    if not names:
        raise ValueError("coordinate list must be nonempty")
    if len(set(names)) != len(names):
        raise ValueError("coordinate names must be distinct")
    for name in names:
        if not _IDENT_RE.match(name):
            raise ValueError(f"invalid coordinate name {name!r}")
        if name in _FUNCTIONS:
            raise ValueError(f"coordinate name {name!r} shadows a function")
    parser = _Parser(_tokenize(text), {c: i for i, c in enumerate(names)})
    root = parser.expr()
    kind, text_, pos = parser.peek()
    if kind != "end":
        raise ParseError("syntax", pos, f"unexpected trailing input {text_!r}")
    return Expr(root, names)


# ---------------------------------------------------------------------------
# rendering

_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _node_prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC_ADD if node.op in "+-" else _PREC_MUL
    if isinstance(node, Neg):
        return _PREC_UNARY
    if isinstance(node, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _render(node: Node, min_prec: int) -> str:
    if isinstance(node, Num):
        out = repr(node.value)
    elif isinstance(node, Var):
        out = node.name
    elif isinstance(node, Call):
        out = f"{node.func}({_render(node.arg, _PREC_ADD)})"
    elif isinstance(node, Neg):
        out = "-" + _render(node.arg, _PREC_UNARY)
    elif isinstance(node, Pow):
        # base must sit at atom level, exponent at unary level
        out = _render(node.base, _PREC_ATOM) + "^" + _render(node.exponent, _PREC_UNARY)
    else:
        lhs = _render(node.left, _node_prec(node))
        rhs = _render(node.right, _node_prec(node) + 1)
        out = f"{lhs}{node.op}{rhs}"
    if _node_prec(node) < min_prec:
        return f"({out})"
    return out


def render(expr: Expr) -> str:
    """Canonical text form; ``parse(render(e), e.coords)`` rebuilds ``e``."""
    return _render(expr.root, _PREC_ADD)


# ---------------------------------------------------------------------------
# evaluation

def _constant_value(node: Node):
    """Value of a variable-free subtree, or None if it contains a Var."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return None
    if isinstance(node, Neg):
        v = _constant_value(node.arg)
        return None if v is None else -v
    if isinstance(node, BinOp):
        left = _constant_value(node.left)
        right = _constant_value(node.right)
        if left is None or right is None:
            return None
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left / right if right != 0.0 else math.nan
    if isinstance(node, Pow):
        base = _constant_value(node.base)
        expo = _constant_value(node.exponent)
        if base is None or expo is None:
            return None
        try:
            out = float(base) ** float(expo)
        except (ValueError, OverflowError, ZeroDivisionError):
            return math.nan
        # fractional power of a negative base yields a complex in Python
        return out if isinstance(out, float) else math.nan
    val = _constant_value(node.arg)
    if val is None:
        return None
    try:
        return _FUNCTIONS[node.func][0](val)
    except (ValueError, OverflowError):
        return math.nan


def _chain(node: Node, u, f0, f1, f2):
    v, g, h = u
    try:
        val = f0(v)
        d1 = f1(v)
        d2 = f2(v)
    except (ValueError, OverflowError) as exc:
        raise EvalDomainError(_render(node, _PREC_ADD), str(exc)) from None
    return val, d1 * g, d1 * h + d2 * np.outer(g, g)


def _mul(a, b):
    va, ga, ha = a
    vb, gb, hb = b
    # symmetrize the cross term first: adding its transpose later would
    # break exact Hessian symmetry through addition-order rounding
    cross = np.outer(ga, gb)
    cross = cross + cross.T
    return va * vb, va * gb + vb * ga, va * hb + vb * ha + cross


def _recip(node: Node, u):
    if u[0] == 0.0:
        raise EvalDomainError(_render(node, _PREC_ADD), "division by zero")
    return _chain(node, u, lambda v: 1.0 / v, lambda v: -1.0 / v ** 2,
                  lambda v: 2.0 / v ** 3)


def _int_pow(node: Node, u, k: int, n: int):
    # repeated multiplication keeps negative bases in the domain
    if k < 0:
        return _recip(node, _int_pow(node, u, -k, n))
    acc = (1.0, np.zeros(n), np.zeros((n, n)))
    base = u
    while k > 0:
        if k & 1:
            acc = _mul(acc, base)
        base = _mul(base, base)
        k >>= 1
    return acc


def _jet(node: Node, p: np.ndarray, n: int):
    if isinstance(node, Num):
        return node.value, np.zeros(n), np.zeros((n, n))
    if isinstance(node, Var):
        g = np.zeros(n)
        g[node.index] = 1.0
        return float(p[node.index]), g, np.zeros((n, n))
    if isinstance(node, Neg):
        v, g, h = _jet(node.arg, p, n)
        return -v, -g, -h
    if isinstance(node, BinOp):
        left = _jet(node.left, p, n)
        right = _jet(node.right, p, n)
        if node.op == "+":
            return left[0] + right[0], left[1] + right[1], left[2] + right[2]
        if node.op == "-":
            return left[0] - right[0], left[1] - right[1], left[2] - right[2]
        if node.op == "*":
            return _mul(left, right)
        return _mul(left, _recip(node, right))
    if isinstance(node, Pow):
        base = _jet(node.base, p, n)
        const = _constant_value(node.exponent)
        if const is not None and not math.isfinite(const):
            # fold failed; evaluate the exponent below for a precise error
            const = None
        if const is not None and abs(const - round(const)) <= 1e-12:
            return _int_pow(node, base, int(round(const)), n)
        if base[0] <= 0.0:
            raise EvalDomainError(_render(node, _PREC_ADD),
                                  "non-integer power of a non-positive base")
        if const is not None:
            c = float(const)
            return _chain(node, base, lambda v: v ** c,
                          lambda v: c * v ** (c - 1.0),
                          lambda v: c * (c - 1.0) * v ** (c - 2.0))
        expo = _jet(node.exponent, p, n)
        log_base = _chain(node, base, math.log, lambda v: 1.0 / v,
                          lambda v: -1.0 / (v * v))
        return _chain(node, _mul(expo, log_base), math.exp, math.exp, math.exp)
    u = _jet(node.arg, p, n)
    if node.func in _POSITIVE_DOMAIN and u[0] <= 0.0:
        raise EvalDomainError(_render(node, _PREC_ADD),
                              f"{node.func} of a non-positive argument")
    return _chain(node, u, *_FUNCTIONS[node.func])


def eval_jet2(expr: Expr, point) -> Jet2:
    """Evaluate ``expr`` at ``point`` to a second-order jet.

    Parameters
    ----------
    expr : Expr
    point : array-like of shape (n,)
        Coordinates in the order of ``expr.coords``.

    Raises
    ------
    EvalDomainError
        If the point is outside the domain of some subexpression; the
        message names the offending subtree.
    """
    p = np.asarray(point, dtype=float)
    n = len(expr.coords)
    if p.shape != (n,):
        raise ValueError(f"point must have shape ({n},), got {p.shape}")
    v, g, h = _jet(expr.root, p, n)
    if not (math.isfinite(v) and np.all(np.isfinite(g)) and np.all(np.isfinite(h))):
        raise EvalDomainError(render(expr), "non-finite result")
    return Jet2(v, g, h)
