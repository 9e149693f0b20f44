"""Expression trees for intensional constraints.

Nodes are immutable; relational and logical operators evaluate to 0/1
integers so booleans can appear inside arithmetic (e.g. ``add(b, w)`` over
0/1 terms).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .errors import ArityMismatchError, UnboundVariableError

Expr = Union["IntConst", "VarRef", "Op"]

# kind -> (min_arity, max_arity or None for unbounded)
OP_ARITY: dict[str, tuple[int, int | None]] = {
    "neg": (1, 1),
    "abs": (1, 1),
    "not": (1, 1),
    "sub": (2, 2),
    "dist": (2, 2),
    "eq": (2, 2),
    "ne": (2, 2),
    "lt": (2, 2),
    "le": (2, 2),
    "gt": (2, 2),
    "ge": (2, 2),
    "xor": (2, 2),
    "iff": (2, 2),
    "imp": (2, 2),
    "add": (2, None),
    "mul": (2, None),
    "and": (2, None),
    "or": (2, None),
}

BOOLEAN_KINDS = frozenset({"eq", "ne", "lt", "le", "gt", "ge", "not", "and", "or", "xor", "iff", "imp"})
LOGICAL_KINDS = frozenset({"not", "and", "or", "xor", "iff", "imp"})


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class VarRef:
    var_id: str


@dataclass(frozen=True)
class Op:
    kind: str
    children: tuple[Expr, ...]

    def __post_init__(self):
        if self.kind not in OP_ARITY:
            raise ArityMismatchError(f"unknown operator {self.kind!r}")
        lo, hi = OP_ARITY[self.kind]
        n = len(self.children)
        if n < lo or (hi is not None and n > hi):
            raise ArityMismatchError(f"operator {self.kind!r} takes {lo}{'+' if hi is None else ''} operands, got {n}")


def op(kind: str, *children: Expr) -> Op:
    return Op(kind, tuple(children))


def var(var_id: str) -> VarRef:
    return VarRef(var_id)


def const(value: int) -> IntConst:
    return IntConst(value)


def expr_vars(expr: Expr) -> Iterator[str]:
    """Yield referenced variable ids, in depth-first order (with repeats)."""
    if isinstance(expr, VarRef):
        yield expr.var_id
    elif isinstance(expr, Op):
        for child in expr.children:
            yield from expr_vars(child)


def is_boolean(expr: Expr) -> bool:
    return isinstance(expr, Op) and expr.kind in BOOLEAN_KINDS


def evaluate(expr: Expr, binding: Mapping[str, int]) -> int:
    """Evaluate an expression; boolean results are 1 (true) / 0 (false)."""
    if isinstance(expr, IntConst):
        return expr.value
    if isinstance(expr, VarRef):
        try:
            return binding[expr.var_id]
        except KeyError:
            raise UnboundVariableError(expr.var_id) from None
    vals = [evaluate(child, binding) for child in expr.children]
    kind = expr.kind
    if kind == "neg":
        return -vals[0]
    if kind == "abs":
        return abs(vals[0])
    if kind == "add":
        return sum(vals)
    if kind == "sub":
        return vals[0] - vals[1]
    if kind == "mul":
        out = 1
        for v in vals:
            out *= v
        return out
    if kind == "dist":
        return abs(vals[0] - vals[1])
    if kind == "eq":
        return int(vals[0] == vals[1])
    if kind == "ne":
        return int(vals[0] != vals[1])
    if kind == "lt":
        return int(vals[0] < vals[1])
    if kind == "le":
        return int(vals[0] <= vals[1])
    if kind == "gt":
        return int(vals[0] > vals[1])
    if kind == "ge":
        return int(vals[0] >= vals[1])
    if kind == "not":
        return int(vals[0] == 0)
    if kind == "and":
        return int(all(v != 0 for v in vals))
    if kind == "or":
        return int(any(v != 0 for v in vals))
    if kind == "xor":
        return int((vals[0] != 0) != (vals[1] != 0))
    if kind == "iff":
        return int((vals[0] != 0) == (vals[1] != 0))
    if kind == "imp":
        return int(vals[0] == 0 or vals[1] != 0)
    raise ArityMismatchError(f"unknown operator {kind!r}")


def format_expr(expr: Expr) -> str:
    """Render in functional prefix syntax, e.g. ``eq(add(x,y),z)``."""
    if isinstance(expr, IntConst):
        return str(expr.value)
    if isinstance(expr, VarRef):
        return expr.var_id
    return f"{expr.kind}({','.join(format_expr(c) for c in expr.children)})"


class ExprSyntaxError(ValueError):
    pass


def parse_expr(text: str) -> Expr:
    """Parse functional prefix syntax (the only accepted intension form)."""
    tokens = _tokenize(text)
    pos = 0

    def parse_node() -> Expr:
        nonlocal pos
        if pos >= len(tokens):
            raise ExprSyntaxError(f"unexpected end of expression in {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok.lstrip("-").isdigit():
            return IntConst(int(tok))
        if tok in "(),":
            raise ExprSyntaxError(f"unexpected {tok!r} in {text!r}")
        if pos < len(tokens) and tokens[pos] == "(":
            if tok not in OP_ARITY:
                raise ExprSyntaxError(f"unknown operator {tok!r} in {text!r}")
            pos += 1
            children = [parse_node()]
            while pos < len(tokens) and tokens[pos] == ",":
                pos += 1
                children.append(parse_node())
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ExprSyntaxError(f"missing ')' in {text!r}")
            pos += 1
            try:
                return Op(tok, tuple(children))
            except ArityMismatchError as exc:
                raise ExprSyntaxError(str(exc)) from None
        return VarRef(tok)

    node = parse_node()
    if pos != len(tokens):
        raise ExprSyntaxError(f"trailing tokens in {text!r}")
    return node


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "(),":
            tokens.append(ch)
            i += 1
        else:
            j = i
            if ch == "-":
                j += 1
            while j < len(text) and (text[j].isalnum() or text[j] in "_[]"):
                j += 1
            if j == i:
                raise ExprSyntaxError(f"bad character {ch!r} in {text!r}")
            tokens.append(text[i:j])
            i = j
    return tokens
