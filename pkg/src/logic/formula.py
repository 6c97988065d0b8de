"""
First-order formulas over the pregeometry language.

DESIGN DECISION: Formulas are frozen dataclasses.
They compare and hash structurally, so builders can deduplicate instances
with dicts and a parsed s-expression equals the formula it was printed from.

Atoms:
    Eq(x, y)            x = y
    Theta((x1..xk), y)  y ∈ cl(x1..xk); k = 0 is "y ∈ cl(∅)"
    Rel(R, (x1..xr))    R(x1..xr)
    Colour(i, x)        P_i(x), only meaningful on coloured structures

Variables are plain strings. The smart constructors (`conj`, `disj`,
`exists`, `forall`, `neg`) flatten and drop constants; the dataclasses
themselves never simplify.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import count
from typing import Iterable, Mapping

Var = str


class Formula:
    """Base class of the syntax tree."""

    @cached_property
    def free(self) -> frozenset[Var]:
        return self._free()

    def _free(self) -> frozenset[Var]:
        raise NotImplementedError

    def children(self) -> tuple['Formula', ...]:
        return ()

    def __invert__(self) -> 'Formula':
        return neg(self)

    def __and__(self, other: 'Formula') -> 'Formula':
        return conj(self, other)

    def __or__(self, other: 'Formula') -> 'Formula':
        return disj(self, other)


# =============================================================================
# Atoms
# =============================================================================

@dataclass(frozen=True)
class Top(Formula):
    def _free(self) -> frozenset[Var]:
        return frozenset()


@dataclass(frozen=True)
class Bottom(Formula):
    def _free(self) -> frozenset[Var]:
        return frozenset()


@dataclass(frozen=True)
class Eq(Formula):
    left: Var
    right: Var

    def _free(self) -> frozenset[Var]:
        return frozenset((self.left, self.right))


@dataclass(frozen=True)
class Theta(Formula):
    """y lies in the closure of args."""

    args: tuple[Var, ...]
    y: Var

    def _free(self) -> frozenset[Var]:
        return frozenset(self.args) | {self.y}


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple[Var, ...]

    def _free(self) -> frozenset[Var]:
        return frozenset(self.args)


@dataclass(frozen=True)
class Colour(Formula):
    colour: int
    var: Var

    def _free(self) -> frozenset[Var]:
        return frozenset((self.var,))


# =============================================================================
# Connectives and quantifiers
# =============================================================================

@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def _free(self) -> frozenset[Var]:
        return self.body.free

    def children(self) -> tuple[Formula, ...]:
        return (self.body,)


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...]

    def _free(self) -> frozenset[Var]:
        return frozenset().union(*(p.free for p in self.parts))

    def children(self) -> tuple[Formula, ...]:
        return self.parts


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...]

    def _free(self) -> frozenset[Var]:
        return frozenset().union(*(p.free for p in self.parts))

    def children(self) -> tuple[Formula, ...]:
        return self.parts


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def _free(self) -> frozenset[Var]:
        return self.left.free | self.right.free

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula

    def _free(self) -> frozenset[Var]:
        return self.left.free | self.right.free

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Exists(Formula):
    variables: tuple[Var, ...]
    body: Formula

    def _free(self) -> frozenset[Var]:
        return self.body.free - set(self.variables)

    def children(self) -> tuple[Formula, ...]:
        return (self.body,)


@dataclass(frozen=True)
class Forall(Formula):
    variables: tuple[Var, ...]
    body: Formula

    def _free(self) -> frozenset[Var]:
        return self.body.free - set(self.variables)

    def children(self) -> tuple[Formula, ...]:
        return (self.body,)


Quantifier = (Exists, Forall)

TOP = Top()
BOTTOM = Bottom()


# =============================================================================
# Smart constructors
# =============================================================================

def neg(f: Formula) -> Formula:
    if isinstance(f, Top):
        return BOTTOM
    if isinstance(f, Bottom):
        return TOP
    return Not(f)


def conj(*parts: Formula) -> Formula:
    """Flattened conjunction; TOP when empty."""
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, Bottom):
            return BOTTOM
        if isinstance(p, Top):
            continue
        flat.extend(p.parts if isinstance(p, And) else (p,))
    if not flat:
        return TOP
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    """Flattened disjunction; BOTTOM when empty."""
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, Top):
            return TOP
        if isinstance(p, Bottom):
            continue
        flat.extend(p.parts if isinstance(p, Or) else (p,))
    if not flat:
        return BOTTOM
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def exists(variables: Iterable[Var], body: Formula) -> Formula:
    vs = tuple(variables)
    return Exists(vs, body) if vs else body


def forall(variables: Iterable[Var], body: Formula) -> Formula:
    vs = tuple(variables)
    return Forall(vs, body) if vs else body


def all_vars(f: Formula) -> frozenset[Var]:
    """Every variable name occurring in f, free or bound."""
    names = set(f.free)
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Quantifier):
            names.update(g.variables)
        stack.extend(g.children())
    return frozenset(names)


def free_vars(f: Formula) -> frozenset[Var]:
    return f.free


def fresh_name(base: Var, taken: Iterable[Var]) -> Var:
    used = set(taken)
    if base not in used:
        return base
    for i in count(1):
        candidate = f"{base}_{i}"
        if candidate not in used:
            return candidate
    raise AssertionError("unreachable")


# =============================================================================
# Renaming
# =============================================================================

def rename_free(f: Formula, mapping: Mapping[Var, Var]) -> Formula:
    """
    Simultaneous, capture-avoiding renaming of free variables.

    A bound variable that would capture one of the new names is renamed
    to a fresh one first.
    """
    active = {k: v for k, v in mapping.items() if k != v and k in f.free}
    if not active:
        return f

    def ren(v: Var) -> Var:
        return active.get(v, v)

    if isinstance(f, Eq):
        return Eq(ren(f.left), ren(f.right))
    if isinstance(f, Theta):
        return Theta(tuple(ren(a) for a in f.args), ren(f.y))
    if isinstance(f, Rel):
        return Rel(f.name, tuple(ren(a) for a in f.args))
    if isinstance(f, Colour):
        return Colour(f.colour, ren(f.var))
    if isinstance(f, Not):
        return Not(rename_free(f.body, active))
    if isinstance(f, And):
        return And(tuple(rename_free(p, active) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(rename_free(p, active) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(rename_free(f.left, active), rename_free(f.right, active))
    if isinstance(f, Iff):
        return Iff(rename_free(f.left, active), rename_free(f.right, active))
    if isinstance(f, Quantifier):
        inner = {k: v for k, v in active.items() if k not in f.variables}
        targets = {inner[k] for k in inner if k in f.body.free}
        taken = set(all_vars(f)) | set(inner.values())
        bound: list[Var] = []
        for v in f.variables:
            if v in targets:
                new = fresh_name(v, taken)
                taken.add(new)
                inner[v] = new
                bound.append(new)
            else:
                bound.append(v)
        return type(f)(tuple(bound), rename_free(f.body, inner))
    raise TypeError(f"Unknown formula node {type(f).__name__}")


# =============================================================================
# Syntactic shape
# =============================================================================

def _dual(kind: str) -> str:
    return "A" if kind == "E" else "E"


def _in_class(f: Formula, kind: str, level: int) -> bool:
    """
    f is (equivalent, by prenex moves only) to a formula with at most
    `level` quantifier blocks, the outermost of type `kind`.
    """
    if isinstance(f, (Top, Bottom, Eq, Theta, Rel, Colour)):
        return True
    if isinstance(f, Not):
        return _in_class(f.body, _dual(kind), level)
    if isinstance(f, (And, Or)):
        return all(_in_class(p, kind, level) for p in f.parts)
    if isinstance(f, Implies):
        return _in_class(f.left, _dual(kind), level) and _in_class(f.right, kind, level)
    if isinstance(f, Iff):
        return all(
            _in_class(g, k, level)
            for g in (f.left, f.right)
            for k in (kind, _dual(kind))
        )
    if isinstance(f, Quantifier):
        if level == 0:
            return False
        q = "E" if isinstance(f, Exists) else "A"
        if q == kind:
            return _in_class(f.body, kind, level)
        return _in_class(f, q, level - 1)
    raise TypeError(f"Unknown formula node {type(f).__name__}")


def is_quantifier_free(f: Formula) -> bool:
    return _in_class(f, "E", 0)


def is_existential(f: Formula) -> bool:
    return _in_class(f, "E", 1)


def is_universal(f: Formula) -> bool:
    return _in_class(f, "A", 1)


def is_forall_exists(f: Formula) -> bool:
    """∀x̄∃ȳψ with ψ quantifier-free, after prenexing."""
    return _in_class(f, "A", 2)


def size(f: Formula) -> int:
    """Node count."""
    total = 0
    stack = [f]
    while stack:
        g = stack.pop()
        total += 1
        stack.extend(g.children())
    return total
