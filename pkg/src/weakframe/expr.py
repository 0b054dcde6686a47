"""Scalar expressions over chart coordinates.

A tiny grammar (numbers, coordinate names, ``+ - * / ^``, parentheses and the
functions ``sin cos exp log sqrt``) is parsed into an immutable tree.  Trees
are evaluated vectorised over a batch of points, optionally together with
their gradient and Hessian by forward propagation of truncated second-order
Taylor coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Unary",
    "Binary",
    "Pow",
    "Jet2",
    "ExprSyntaxError",
    "DomainError",
    "parse_expression",
    "evaluate",
    "evaluate_jet2",
    "to_string",
    "const",
    "substitute",
]

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")


class ExprSyntaxError(ValueError):
    """Raised for malformed expression text; ``pos`` is a 0-based offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at offset {pos}")


class DomainError(ArithmeticError):
    """Evaluation left the domain of a node (log of non-positive, x/0, ...)."""

    def __init__(self, message: str, node: "Expr", point=None):
        self.node = node
        self.point = point
        where = "" if point is None else " at point [" + ", ".join(f"{float(v):.12g}" for v in np.ravel(point)) + "]"
        super().__init__(f"{message} in '{to_string(node)}'{where}")


# --------------------------------------------------------------------------
# tree nodes
# --------------------------------------------------------------------------


class Expr:
    """Base class of expression nodes.  Arithmetic operators build new trees."""

    __slots__ = ()

    def __add__(self, other):
        other = _lift(other)
        if _is_zero(other):
            return self
        if _is_zero(self):
            return other
        return Binary("+", self, other)

    def __radd__(self, other):
        return _lift(other) + self

    def __sub__(self, other):
        other = _lift(other)
        if _is_zero(other):
            return self
        if _is_zero(self):
            return -other
        return Binary("-", self, other)

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        if _is_zero(self) or _is_zero(other):
            return Const(0.0)
        if _is_one(other):
            return self
        if _is_one(self):
            return other
        return Binary("*", self, other)

    def __rmul__(self, other):
        return _lift(other) * self

    def __truediv__(self, other):
        other = _lift(other)
        if _is_one(other):
            return self
        return Binary("/", self, other)

    def __rtruediv__(self, other):
        return _lift(other) / self

    def __neg__(self):
        if isinstance(self, Const):
            return Const(-self.value)
        return Unary("neg", self)

    def __pow__(self, exponent):
        if isinstance(exponent, Expr):
            if not isinstance(exponent, Const):
                raise TypeError("exponent must be a constant")
            exponent = exponent.value
        return Pow(self, float(exponent))

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True, eq=True, repr=True)
class Const(Expr):
    value: float


@dataclass(frozen=True, eq=True, repr=True)
class Var(Expr):
    index: int
    name: str = ""


@dataclass(frozen=True, eq=True, repr=True)
class Unary(Expr):
    op: str  # "neg" or one of FUNCTIONS
    arg: Expr


@dataclass(frozen=True, eq=True, repr=True)
class Binary(Expr):
    op: str  # one of + - * /
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True, repr=True)
class Pow(Expr):
    base: Expr
    exponent: float


def const(value: float) -> Const:
    return Const(float(value))


def _lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return Const(float(x))
    raise TypeError(f"cannot use {type(x).__name__} in an expression")


def _is_zero(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 0.0


def _is_one(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 1.0


def max_var_index(e: Expr) -> int:
    """Largest coordinate index used by ``e`` (-1 for constants)."""
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Const):
        return -1
    if isinstance(e, Unary):
        return max_var_index(e.arg)
    if isinstance(e, Pow):
        return max_var_index(e.base)
    return max(max_var_index(e.left), max_var_index(e.right))


def substitute(e: Expr, values: Sequence[Expr]) -> Expr:
    """Replace coordinate ``k`` by ``values[k]`` (composition with a chart map)."""
    if isinstance(e, Var):
        return _lift(values[e.index])
    if isinstance(e, Const):
        return e
    if isinstance(e, Unary):
        a = substitute(e.arg, values)
        return -a if e.op == "neg" else Unary(e.op, a)
    if isinstance(e, Pow):
        return Pow(substitute(e.base, values), e.exponent)
    l, r = substitute(e.left, values), substitute(e.right, values)
    return {"+": l + r, "-": l - r, "*": l * r, "/": l / r}[e.op]


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, coord_names: Sequence[str]):
        self.text = text
        self.names = {name: i for i, name in enumerate(coord_names)}
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, pos=None):
        if pos is None:
            pos = self.peek()[2]
        return ExprSyntaxError(message, pos, self.text)

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value or kind != "op":
            shown = val if kind != "end" else "end of input"
            raise self.error(f"expected {value!r}, got {shown!r}", pos)

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise self.error(f"unexpected token {val!r}", pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            e = Binary(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            e = Binary(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "op" and val in ("-", "+"):
            self.take()
            arg = self.unary()
            return Unary("neg", arg) if val == "-" else arg
        return self.power()

    def power(self) -> Expr:
        e = self.atom()
        while self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            e = Pow(e, self.exponent())
        return e

    def exponent(self) -> float:
        kind, val, pos = self.peek()
        if kind == "op" and val == "(":
            self.take()
            x = self.signed_number()
            self.expect(")")
            return x
        return self.signed_number()

    def signed_number(self) -> float:
        sign = 1.0
        kind, val, pos = self.peek()
        if kind == "op" and val in ("-", "+"):
            self.take()
            sign = -1.0 if val == "-" else 1.0
            kind, val, pos = self.peek()
        if kind != "num":
            raise self.error("exponent must be a constant number", pos)
        self.take()
        return sign * float(val)

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "num":
            return Const(float(val))
        if kind == "name":
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                if val not in FUNCTIONS:
                    raise self.error(f"unknown function {val!r}", pos)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Unary(val, arg)
            if val in self.names:
                return Var(self.names[val], val)
            raise self.error(f"unknown identifier {val!r}", pos)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        shown = val if kind != "end" else "end of input"
        raise self.error(f"unexpected token {shown!r}", pos)


def parse_expression(text: str, coord_names: Sequence[str]) -> Expr:
    """Parse ``text`` into an :class:`Expr` over the named coordinates."""
    return _Parser(text, list(coord_names)).parse()


# --------------------------------------------------------------------------
# printing
# --------------------------------------------------------------------------


def _fmt(x: float) -> str:
    s = repr(float(x))
    if s in ("inf", "-inf", "nan"):
        raise ValueError(f"cannot print non-finite constant {s}")
    return s


def to_string(e: Expr, coord_names: Sequence[str] | None = None) -> str:
    """Fully parenthesised text that reparses to a bit-identical tree."""
    if isinstance(e, Const):
        s = _fmt(e.value)
        return f"({s})" if s.startswith("-") else s
    if isinstance(e, Var):
        if coord_names is not None:
            return coord_names[e.index]
        return e.name or f"x{e.index + 1}"
    if isinstance(e, Unary):
        inner = to_string(e.arg, coord_names)
        if e.op == "neg":
            return f"(-{inner})"
        return f"{e.op}({inner})"
    if isinstance(e, Pow):
        return f"({to_string(e.base, coord_names)})^({_fmt(e.exponent)})"
    return f"({to_string(e.left, coord_names)} {e.op} {to_string(e.right, coord_names)})"


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and Hessian of a scalar.

    For a single point ``value`` is a float, ``gradient`` has shape ``(dim,)``
    and ``hessian`` ``(dim, dim)``; batched evaluation prepends the batch axes.
    """

    value: Union[float, np.ndarray]
    gradient: np.ndarray
    hessian: np.ndarray | None = None


def _as_points(pt, dim_needed: int) -> tuple[np.ndarray, bool]:
    pts = np.asarray(pt, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise ValueError("points must have shape (dim,) or (N, dim)")
    if pts.shape[1] <= dim_needed:
        raise ValueError(
            f"point has dimension {pts.shape[1]} but expression uses coordinate {dim_needed + 1}"
        )
    return pts, single


def _fail(mask, node, pts, message):
    idx = int(np.argmax(mask))
    raise DomainError(message, node, pts[idx])


def _eval(e: Expr, pts: np.ndarray) -> np.ndarray:
    n = pts.shape[0]
    if isinstance(e, Const):
        return np.full(n, e.value)
    if isinstance(e, Var):
        return pts[:, e.index].copy()
    if isinstance(e, Unary):
        a = _eval(e.arg, pts)
        return _unary_value(e, a, pts)
    if isinstance(e, Pow):
        a = _eval(e.base, pts)
        _check_pow(e, a, pts)
        return _pow_value(a, e.exponent)
    a = _eval(e.left, pts)
    b = _eval(e.right, pts)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if np.any(b == 0.0):
        _fail(b == 0.0, e, pts, "division by zero")
    return a / b


def _unary_value(e: Unary, a: np.ndarray, pts) -> np.ndarray:
    op = e.op
    if op == "neg":
        return -a
    if op == "sin":
        return np.sin(a)
    if op == "cos":
        return np.cos(a)
    if op == "exp":
        return np.exp(a)
    if op == "log":
        if np.any(a <= 0.0):
            _fail(a <= 0.0, e, pts, "log of non-positive value")
        return np.log(a)
    if op == "sqrt":
        if np.any(a < 0.0):
            _fail(a < 0.0, e, pts, "sqrt of negative value")
        return np.sqrt(a)
    raise ValueError(f"unknown unary op {op!r}")


def _is_int(c: float) -> bool:
    return float(c).is_integer()


def _check_pow(e: Pow, a: np.ndarray, pts):
    c = e.exponent
    if _is_int(c):
        if c < 0 and np.any(a == 0.0):
            _fail(a == 0.0, e, pts, "zero raised to a negative power")
    elif np.any(a < 0.0):
        _fail(a < 0.0, e, pts, "negative base with non-integer exponent")
    elif c < 2 and np.any(a == 0.0):
        # value may exist but derivatives blow up; report uniformly
        _fail(a == 0.0, e, pts, "zero base with non-integer exponent")


def _pow_value(a: np.ndarray, c: float) -> np.ndarray:
    if _is_int(c):
        k = int(c)
        if k == 0:
            return np.ones_like(a)
        if k == 1:
            return a.copy()
        if k == 2:
            return a * a
        return a ** k if k > 0 else 1.0 / a ** (-k)
    return a ** c


def _derivs(e: Expr, a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """phi(a), phi'(a), phi''(a) for a unary-like node."""
    if isinstance(e, Pow):
        c = e.exponent
        return (
            _pow_value(a, c),
            c * _pow_value(a, c - 1) if c != 0 else np.zeros_like(a),
            c * (c - 1) * _pow_value(a, c - 2) if c not in (0, 1) else np.zeros_like(a),
        )
    op = e.op
    if op == "sin":
        s, c = np.sin(a), np.cos(a)
        return s, c, -s
    if op == "cos":
        s, c = np.sin(a), np.cos(a)
        return c, -s, -c
    if op == "exp":
        v = np.exp(a)
        return v, v, v
    if op == "log":
        return np.log(a), 1.0 / a, -1.0 / (a * a)
    if op == "sqrt":
        r = np.sqrt(a)
        return r, 0.5 / r, -0.25 / (r * a)
    raise ValueError(op)


def _jet(e: Expr, pts: np.ndarray, order: int):
    """Return (value, gradient, hessian) arrays; hessian is None when order < 2."""
    n, dim = pts.shape
    if isinstance(e, Const):
        v = np.full(n, e.value)
        g = np.zeros((n, dim))
        h = np.zeros((n, dim, dim)) if order >= 2 else None
        return v, g, h
    if isinstance(e, Var):
        v = pts[:, e.index].copy()
        g = np.zeros((n, dim))
        g[:, e.index] = 1.0
        h = np.zeros((n, dim, dim)) if order >= 2 else None
        return v, g, h
    if isinstance(e, (Unary, Pow)):
        arg = e.arg if isinstance(e, Unary) else e.base
        a, ga, ha = _jet(arg, pts, order)
        if isinstance(e, Unary) and e.op == "neg":
            return -a, -ga, (-ha if ha is not None else None)
        if isinstance(e, Pow):
            _check_pow(e, a, pts)
        else:
            _unary_value(e, a, pts)  # domain check
        v, d1, d2 = _derivs(e, a)
        g = d1[:, None] * ga
        h = None
        if order >= 2:
            h = d1[:, None, None] * ha + d2[:, None, None] * ga[:, :, None] * ga[:, None, :]
        return v, g, h
    a, ga, ha = _jet(e.left, pts, order)
    b, gb, hb = _jet(e.right, pts, order)
    if e.op in ("+", "-"):
        s = 1.0 if e.op == "+" else -1.0
        h = ha + s * hb if order >= 2 else None
        return a + s * b, ga + s * gb, h
    if e.op == "*":
        g = a[:, None] * gb + b[:, None] * ga
        h = None
        if order >= 2:
            cross = ga[:, :, None] * gb[:, None, :]
            h = a[:, None, None] * hb + b[:, None, None] * ha + cross + np.swapaxes(cross, 1, 2)
        return a * b, g, h
    # division: a * (1/b)
    if np.any(b == 0.0):
        _fail(b == 0.0, e, pts, "division by zero")
    r = 1.0 / b
    gr = -(r * r)[:, None] * gb
    hr = None
    if order >= 2:
        hr = -(r * r)[:, None, None] * hb + (2.0 * r ** 3)[:, None, None] * gb[:, :, None] * gb[:, None, :]
    g = a[:, None] * gr + r[:, None] * ga
    h = None
    if order >= 2:
        cross = ga[:, :, None] * gr[:, None, :]
        h = a[:, None, None] * hr + r[:, None, None] * ha + cross + np.swapaxes(cross, 1, 2)
    return a * r, g, h


def evaluate(e: Expr, pt) -> Union[float, np.ndarray]:
    """Value of ``e`` at one point (float) or a batch ``(N, dim)`` (array)."""
    pts, single = _as_points(pt, max_var_index(e))
    with np.errstate(all="ignore"):
        v = _eval(e, pts)
    return float(v[0]) if single else v


def evaluate_jet2(e: Expr, pt, order: int = 2) -> Jet2:
    """Value, gradient and (for ``order=2``) Hessian of ``e`` at ``pt``."""
    pts, single = _as_points(pt, max_var_index(e))
    with np.errstate(all="ignore"):
        v, g, h = _jet(e, pts, order)
    if single:
        return Jet2(float(v[0]), g[0], None if h is None else h[0])
    return Jet2(v, g, h)
