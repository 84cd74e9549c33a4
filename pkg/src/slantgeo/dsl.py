"""Expression language for chart components, loops and curves.

Grammar (standard precedence, ^ right-associative and tightest):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?
    atom    := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'

Known functions: sin cos tan exp log sqrt asin acos atan sinh cosh.
Free names other than declared variables must be bound as parameters.
Evaluation carries a full second-order jet (value, two first partials,
three second partials) through the tree, so chart derivatives are exact
to machine precision with no finite differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

VARIABLES = ("u", "v", "s", "t")
FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt",
             "asin", "acos", "atan", "sinh", "cosh")


class DslError(ValueError):
    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at column {pos + 1})"
        super().__init__(message)


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a function name
    arg: object
    pos: int = 0


@dataclass(frozen=True)
class Binary:
    op: str  # + - * / ^
    left: object
    right: object
    pos: int = 0


def free_names(ast):
    if isinstance(ast, Num):
        return set()
    if isinstance(ast, Name):
        return {ast.ident}
    if isinstance(ast, Unary):
        return free_names(ast.arg)
    return free_names(ast.left) | free_names(ast.right)


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_OPS = set("+-*/^(),")


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            tokens.append((c, c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            try:
                val = float(text[i:j])
            except ValueError:
                raise DslError(f"bad number {text[i:j]!r}", i) from None
            tokens.append(("num", val, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise DslError(f"unexpected character {c!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def next(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise DslError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self):
        ast = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise DslError(f"unexpected token {tok[1]!r}", tok[2])
        return ast

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _, pos = self.next()
            node = Binary(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.next()
            node = Binary(op, node, self.unary(), pos)
        return node

    def unary(self):
        if self.peek()[0] == "-":
            _, _, pos = self.next()
            return Unary("neg", self.unary(), pos)
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "^":
            _, _, pos = self.next()
            node = Binary("^", node, self.unary(), pos)
        return node

    def atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return Num(val)
        if kind == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "name":
            if self.peek()[0] == "(":
                if val not in FUNCTIONS:
                    raise DslError(f"unknown function {val!r}", pos)
                self.next()
                args = [self.expr()]
                while self.peek()[0] == ",":
                    self.next()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != 1:
                    raise DslError(f"{val} takes 1 argument, got {len(args)}", pos)
                return Unary(val, args[0], pos)
            if val == "pi":
                return Num(math.pi)
            return Name(val)
        raise DslError(f"unexpected token {val!r}", pos)


def parse(text):
    return _Parser(text).parse()


def to_text(ast):
    """Print an AST back to source (parse(to_text(a)) evaluates identically)."""
    def emit(node, parent_prec):
        if isinstance(node, Num):
            s = repr(node.value)
            return f"({s})" if node.value < 0 and parent_prec > 0 else s
        if isinstance(node, Name):
            return node.ident
        if isinstance(node, Unary):
            if node.op == "neg":
                inner = emit(node.arg, 25)
                s = f"-{inner}"
                return f"({s})" if parent_prec > 20 else s
            return f"{node.op}({emit(node.arg, 0)})"
        prec = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}[node.op]
        # Left-associative ops parenthesize equal-precedence right children
        # so the reparse rebuilds the identical tree (float arithmetic is
        # not associative); ^ is right-associative.
        lp = prec if node.op != "^" else prec + 1
        rp = prec if node.op == "^" else prec + 1
        s = f"{emit(node.left, lp)} {node.op} {emit(node.right, rp)}"
        return f"({s})" if parent_prec > prec or (node.op == "^" and parent_prec == prec) else s

    return emit(ast, 0)


# ---------------------------------------------------------------------------
# Second-order dual numbers: one pass yields the full 2-jet.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Jet2Value:
    value: float
    du: float
    dv: float
    duu: float
    duv: float
    dvv: float

    @classmethod
    def const(cls, c):
        return cls(float(c), 0.0, 0.0, 0.0, 0.0, 0.0)

    @classmethod
    def var_u(cls, x):
        return cls(float(x), 1.0, 0.0, 0.0, 0.0, 0.0)

    @classmethod
    def var_v(cls, x):
        return cls(float(x), 0.0, 1.0, 0.0, 0.0, 0.0)

    def __add__(self, o):
        return Jet2Value(self.value + o.value, self.du + o.du, self.dv + o.dv,
                         self.duu + o.duu, self.duv + o.duv, self.dvv + o.dvv)

    def __sub__(self, o):
        return Jet2Value(self.value - o.value, self.du - o.du, self.dv - o.dv,
                         self.duu - o.duu, self.duv - o.duv, self.dvv - o.dvv)

    def __neg__(self):
        return Jet2Value(-self.value, -self.du, -self.dv, -self.duu, -self.duv, -self.dvv)

    def __mul__(self, o):
        return Jet2Value(
            self.value * o.value,
            self.du * o.value + self.value * o.du,
            self.dv * o.value + self.value * o.dv,
            self.duu * o.value + 2.0 * self.du * o.du + self.value * o.duu,
            self.duv * o.value + self.du * o.dv + self.dv * o.du + self.value * o.duv,
            self.dvv * o.value + 2.0 * self.dv * o.dv + self.value * o.dvv,
        )

    def reciprocal(self, node=None):
        if self.value == 0.0:
            raise DslError("division by zero", getattr(node, "pos", None))
        w = 1.0 / self.value
        return _chain(self, w, -w * w, 2.0 * w * w * w)

    def __truediv__(self, o):
        return self * o.reciprocal()


def _chain(g, f, fp, fpp):
    """Compose a scalar function (value f, derivs fp, fpp at g.value) with a jet."""
    return Jet2Value(
        f,
        fp * g.du,
        fp * g.dv,
        fpp * g.du * g.du + fp * g.duu,
        fpp * g.du * g.dv + fp * g.duv,
        fpp * g.dv * g.dv + fp * g.dvv,
    )


def _apply_function(op, g, node):
    x = g.value
    if op == "sin":
        return _chain(g, math.sin(x), math.cos(x), -math.sin(x))
    if op == "cos":
        return _chain(g, math.cos(x), -math.sin(x), -math.cos(x))
    if op == "tan":
        t, s = math.tan(x), 1.0 / math.cos(x) ** 2
        return _chain(g, t, s, 2.0 * t * s)
    if op == "exp":
        e = math.exp(x)
        return _chain(g, e, e, e)
    if op == "log":
        if x <= 0.0:
            raise DslError(f"log of non-positive value {x!r}", getattr(node, "pos", None))
        return _chain(g, math.log(x), 1.0 / x, -1.0 / (x * x))
    if op == "sqrt":
        if x < 0.0:
            raise DslError(f"sqrt of negative value {x!r}", getattr(node, "pos", None))
        if x == 0.0:
            raise DslError("sqrt not differentiable at 0", getattr(node, "pos", None))
        r = math.sqrt(x)
        return _chain(g, r, 0.5 / r, -0.25 / (r * x))
    if op == "asin":
        d = 1.0 - x * x
        if d <= 0.0:
            raise DslError("asin argument out of (-1, 1)", getattr(node, "pos", None))
        return _chain(g, math.asin(x), d ** -0.5, x * d ** -1.5)
    if op == "acos":
        d = 1.0 - x * x
        if d <= 0.0:
            raise DslError("acos argument out of (-1, 1)", getattr(node, "pos", None))
        return _chain(g, math.acos(x), -(d ** -0.5), -x * d ** -1.5)
    if op == "atan":
        d = 1.0 + x * x
        return _chain(g, math.atan(x), 1.0 / d, -2.0 * x / (d * d))
    if op == "sinh":
        return _chain(g, math.sinh(x), math.cosh(x), math.sinh(x))
    if op == "cosh":
        return _chain(g, math.cosh(x), math.sinh(x), math.cosh(x))
    raise DslError(f"unknown function {op!r}", getattr(node, "pos", None))


def eval_jet2(ast, u, v, params=None, var_names=("u", "v")):
    """Evaluate the expression with exact first and second partials.

    var_names renames the two active differentiation variables (loops and
    curves are written in s or t).
    """
    params = params or {}

    def ev(node):
        if isinstance(node, Num):
            return Jet2Value.const(node.value)
        if isinstance(node, Name):
            if node.ident == var_names[0]:
                return Jet2Value.var_u(u)
            if node.ident == var_names[1]:
                return Jet2Value.var_v(v)
            if node.ident in params:
                return Jet2Value.const(params[node.ident])
            raise DslError(f"unbound name {node.ident!r}")
        if isinstance(node, Unary):
            if node.op == "neg":
                return -ev(node.arg)
            return _apply_function(node.op, ev(node.arg), node)
        if node.op == "+":
            return ev(node.left) + ev(node.right)
        if node.op == "-":
            return ev(node.left) - ev(node.right)
        if node.op == "*":
            return ev(node.left) * ev(node.right)
        if node.op == "/":
            return ev(node.left) * ev(node.right).reciprocal(node)
        if node.op == "^":
            g = ev(node.left)
            if isinstance(node.right, Num):
                p = node.right.value
                x = g.value
                if x == 0.0 and p < 2.0:
                    if p == 0.0:
                        return Jet2Value.const(1.0)
                    if p == 1.0:
                        return g
                    raise DslError("0 raised to power < 2 is not twice differentiable", node.pos)
                if x < 0.0 and p != round(p):
                    raise DslError("negative base with non-integer exponent", node.pos)
                return _chain(g, x ** p, p * x ** (p - 1.0), p * (p - 1.0) * x ** (p - 2.0))
            h = ev(node.right)
            if g.value <= 0.0:
                raise DslError("general power needs positive base", node.pos)
            return _apply_function("exp", h * _apply_function("log", g, node), node)
        raise DslError(f"unknown operator {node.op!r}", node.pos)

    return ev(ast)


def check_free_names(ast, params):
    """Free names must be chart variables or declared parameters."""
    extra = free_names(ast) - set(VARIABLES) - set(params)
    if extra:
        raise DslError(f"unknown identifier(s): {sorted(extra)}")
