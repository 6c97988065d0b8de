"""
S-expression text format for formulas, and a pretty-printer for reports.

    true | false
    (= x y)
    (theta (x1 x2) y)        y ∈ cl(x1, x2); (theta () y) is y ∈ cl(∅)
    (rel R x y)
    (colour 2 x)
    (not f) (and f ...) (or f ...) (implies f g) (iff f g)
    (exists (x y) f) (forall (x) f)

`parse_sexpr(to_sexpr(f)) == f` for every formula.
"""

import re
from typing import Union

from src.errors import ConfigError
from src.logic.formula import (
    And,
    Bottom,
    Colour,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Rel,
    Theta,
    Top,
)

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

SExpr = Union[str, list['SExpr']]


def to_sexpr(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Eq):
        return f"(= {f.left} {f.right})"
    if isinstance(f, Theta):
        return f"(theta ({' '.join(f.args)}) {f.y})"
    if isinstance(f, Rel):
        return f"(rel {' '.join((f.name, *f.args))})"
    if isinstance(f, Colour):
        return f"(colour {f.colour} {f.var})"
    if isinstance(f, Not):
        return f"(not {to_sexpr(f.body)})"
    if isinstance(f, (And, Or)):
        head = "and" if isinstance(f, And) else "or"
        return "(" + " ".join([head, *(to_sexpr(p) for p in f.parts)]) + ")"
    if isinstance(f, (Implies, Iff)):
        head = "implies" if isinstance(f, Implies) else "iff"
        return f"({head} {to_sexpr(f.left)} {to_sexpr(f.right)})"
    if isinstance(f, (Exists, Forall)):
        head = "exists" if isinstance(f, Exists) else "forall"
        return f"({head} ({' '.join(f.variables)}) {to_sexpr(f.body)})"
    raise TypeError(f"Unknown formula node {type(f).__name__}")


# =============================================================================
# Parsing
# =============================================================================

def _read(tokens: list[str], pos: int) -> tuple[SExpr, int]:
    if pos >= len(tokens):
        raise ConfigError("Malformed formula: unexpected end of input")
    tok = tokens[pos]
    if tok == ")":
        raise ConfigError("Malformed formula: unexpected ')'")
    if tok != "(":
        return tok, pos + 1
    items: list[SExpr] = []
    pos += 1
    while pos < len(tokens) and tokens[pos] != ")":
        item, pos = _read(tokens, pos)
        items.append(item)
    if pos >= len(tokens):
        raise ConfigError("Malformed formula: missing ')'")
    return items, pos + 1


def _name(x: SExpr) -> str:
    if not isinstance(x, str) or not _NAME.match(x):
        raise ConfigError(f"Malformed formula: expected a name, got {x!r}")
    return x


def _names(x: SExpr) -> tuple[str, ...]:
    if not isinstance(x, list):
        raise ConfigError(f"Malformed formula: expected a variable list, got {x!r}")
    return tuple(_name(v) for v in x)


def _arity(node: list[SExpr], n: int) -> None:
    if len(node) != n:
        raise ConfigError(f"Malformed formula: '{node[0]}' takes {n - 1} arguments")


def _build(node: SExpr) -> Formula:
    if isinstance(node, str):
        if node == "true":
            return Top()
        if node == "false":
            return Bottom()
        raise ConfigError(f"Malformed formula: bare token {node!r}")
    if not node or not isinstance(node[0], str):
        raise ConfigError("Malformed formula: empty or headless list")
    head = node[0]
    if head == "=":
        _arity(node, 3)
        return Eq(_name(node[1]), _name(node[2]))
    if head == "theta":
        _arity(node, 3)
        return Theta(_names(node[1]), _name(node[2]))
    if head == "rel":
        if len(node) < 2:
            raise ConfigError("Malformed formula: 'rel' needs a symbol")
        return Rel(_name(node[1]), tuple(_name(a) for a in node[2:]))
    if head == "colour":
        _arity(node, 3)
        colour = node[1]
        if not isinstance(colour, str) or not colour.isdigit():
            raise ConfigError(f"Malformed formula: colour must be a number, got {colour!r}")
        return Colour(int(colour), _name(node[2]))
    if head == "not":
        _arity(node, 2)
        return Not(_build(node[1]))
    if head == "and":
        return And(tuple(_build(p) for p in node[1:]))
    if head == "or":
        return Or(tuple(_build(p) for p in node[1:]))
    if head == "implies":
        _arity(node, 3)
        return Implies(_build(node[1]), _build(node[2]))
    if head == "iff":
        _arity(node, 3)
        return Iff(_build(node[1]), _build(node[2]))
    if head in ("exists", "forall"):
        _arity(node, 3)
        cls = Exists if head == "exists" else Forall
        return cls(_names(node[1]), _build(node[2]))
    raise ConfigError(f"Malformed formula: unknown head {head!r}")


def parse_sexpr(text: str) -> Formula:
    """
    Parse one formula.

    Raises:
        ConfigError: the text is not a single well-formed formula
    """
    tokens = _TOKEN.findall(text)
    node, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise ConfigError("Malformed formula: trailing input after the formula")
    return _build(node)


# =============================================================================
# Pretty printing
# =============================================================================

def pretty(f: Formula) -> str:
    """Infix rendering for reports (not parseable)."""
    if isinstance(f, Top):
        return "⊤"
    if isinstance(f, Bottom):
        return "⊥"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Theta):
        inside = ", ".join(f.args) if f.args else "∅"
        return f"{f.y} ∈ cl({inside})"
    if isinstance(f, Rel):
        return f"{f.name}({', '.join(f.args)})"
    if isinstance(f, Colour):
        return f"P{f.colour}({f.var})"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"{f.body.left} ≠ {f.body.right}"
        if isinstance(f.body, Theta):
            inside = ", ".join(f.body.args) if f.body.args else "∅"
            return f"{f.body.y} ∉ cl({inside})"
        return f"¬{pretty(f.body)}"
    if isinstance(f, And):
        return "(" + " ∧ ".join(pretty(p) for p in f.parts) + ")" if f.parts else "⊤"
    if isinstance(f, Or):
        return "(" + " ∨ ".join(pretty(p) for p in f.parts) + ")" if f.parts else "⊥"
    if isinstance(f, Implies):
        return f"({pretty(f.left)} → {pretty(f.right)})"
    if isinstance(f, Iff):
        return f"({pretty(f.left)} ↔ {pretty(f.right)})"
    if isinstance(f, (Exists, Forall)):
        q = "∃" if isinstance(f, Exists) else "∀"
        return f"{q}{','.join(f.variables)} {pretty(f.body)}"
    raise TypeError(f"Unknown formula node {type(f).__name__}")
