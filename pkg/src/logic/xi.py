"""
The colour-defining formulas ξ(x, y).

Strong case: ξ(x, y) says x and y share a rank-1 flat, or there are
y_2..y_l, each R_1-related to both x and y and to every earlier y_j, all
outside the relevant closures. In a strongly l-coloured structure the y_i
must use l-1 distinct colours different from those of x and y, so x and y
share the remaining colour.

Weak case: ξ_0(x, y) says (x, y) extends to a copy of the witness B with x
and y in the positions of b1 and b2; ξ(x, y) is "x ∈ cl(y), or both are
ξ_0-linked to a common z".

The oracles evaluate the same formulas without quantifier expansion and
must agree with `evaluate` on every pair.
"""

from typing import Optional, Sequence

from src.errors import PreconditionError
from src.logic.characteristic import characteristic_formula
from src.logic.formula import (
    Exists,
    Formula,
    Rel,
    Theta,
    Var,
    conj,
    disj,
    exists,
    neg,
    rename_free,
)
from src.structures.embeddings import find_embeddings
from src.structures.structure import AnyStructure, RelStructure, relational_part


# =============================================================================
# Strong case
# =============================================================================

def build_xi_strong(l: int, r1: int, symbol: str = "R") -> Formula:
    """
    ξ(x, y) for strong l-colourings with R_1 = `symbol` of arity r1.

    Every R_1 atom gets its own r1 - 2 filler variables; r1 = 2 needs none.
    """
    if l < 2 or r1 < 2:
        raise PreconditionError(f"Need l >= 2 and r1 >= 2, got l={l}, r1={r1}")
    witnesses = [f"y{i}" for i in range(2, l + 1)]
    fillers: list[Var] = []

    def related(first: Var, second: Var, tag: str) -> Formula:
        pad = [f"z_{tag}_{j}" for j in range(1, r1 - 1)]
        fillers.extend(pad)
        return Rel(symbol, (first, second, *pad))

    parts: list[Formula] = []
    for i in range(2, l + 1):
        yi = f"y{i}"
        parts.append(related("x", yi, f"x_{i}"))
        parts.append(neg(Theta(("x",), yi)))
        parts.append(related("y", yi, f"y_{i}"))
        parts.append(neg(Theta(("y",), yi)))
        for j in range(2, i):
            yj = f"y{j}"
            parts.append(related(yi, yj, f"{i}_{j}"))
            parts.append(neg(Theta((yj,), yi)))
    return disj(
        Theta(("y",), "x"),
        Theta(("x",), "y"),
        Exists(tuple(witnesses + fillers), conj(*parts)),
    )


class StrongXiOracle:
    """
    ξ_strong on one structure via adjacency bitsets.

    out[u] has bit v when R_1(u, v, ...) holds and v ∉ cl(u);
    into[w] has bit u when R_1(u, w, ...) holds and u ∉ cl(w).
    """

    def __init__(self, m: AnyStructure, l: int, symbol: Optional[str] = None):
        if l < 2:
            raise PreconditionError(f"Need l >= 2, got {l}")
        self.m = m
        self.l = l
        self.pg = m.pg
        name = symbol or m.vocab.minimal_symbol.name
        out: dict[int, int] = {}
        into: dict[int, int] = {}
        seen: set[tuple[int, int]] = set()
        for tup in relational_part(m).tuples(name):
            u, v = tup[0], tup[1]
            if (u, v) in seen:
                continue
            seen.add((u, v))
            if not self.pg.theta((u,), v):
                out[u] = out.get(u, 0) | (1 << v)
            if not self.pg.theta((v,), u):
                into[v] = into.get(v, 0) | (1 << u)
        self._out = out
        self._into = into

    def _chain(self, pool: int, remaining: int) -> bool:
        if remaining == 0:
            return True
        rest = pool
        while rest:
            low = rest & -rest
            y = low.bit_length() - 1
            rest ^= low
            if self._chain(pool & self._into.get(y, 0), remaining - 1):
                return True
        return False

    def holds(self, a: int, b: int) -> bool:
        if self.pg.theta((b,), a) or self.pg.theta((a,), b):
            return True
        pool = self._out.get(a, 0) & self._out.get(b, 0)
        return self._chain(pool, self.l - 1)


def xi_strong_holds(m: AnyStructure, a: int, b: int, l: int, symbol: Optional[str] = None) -> bool:
    return StrongXiOracle(m, l, symbol).holds(a, b)


# =============================================================================
# Weak case
# =============================================================================

def build_weak_xi(
    b: RelStructure,
    b1: int,
    b2: int,
    enumeration: Optional[Sequence[int]] = None,
) -> tuple[Formula, Formula]:
    """
    (ξ_0, ξ) for the witness B.

    The enumeration of B starts with b1, b2 (the rest ascending by
    default). ξ_0 has free variables x, y; ξ has free variables x, y.

    Raises:
        PreconditionError: the enumeration does not start with b1, b2
    """
    order = list(enumeration) if enumeration is not None else (
        [b1, b2] + [p for p in b.points if p not in (b1, b2)]
    )
    if len(order) < 2 or order[0] != b1 or order[1] != b2:
        raise PreconditionError("The enumeration of B must begin with b1, b2")
    names = ["x", "y"] + [f"u{i}" for i in range(3, len(order) + 1)]
    chi = characteristic_formula(b, names, order, colours=False)
    xi0 = exists(names[2:], chi)
    xi = disj(
        Theta(("y",), "x"),
        Exists(("z",), conj(
            rename_free(xi0, {"y": "z"}),
            rename_free(xi0, {"x": "y", "y": "z"}),
        )),
    )
    return xi0, xi


class WeakXiOracle:
    """ξ_0 and ξ for a witness B, by embedding search instead of expansion."""

    def __init__(self, m: AnyStructure, b: RelStructure, b1: int, b2: int):
        self.m = m
        self.b = b
        self.b1 = b1
        self.b2 = b2
        self._linked: dict[tuple[int, int], bool] = {}

    def xi0(self, a: int, c: int) -> bool:
        key = (a, c)
        hit = self._linked.get(key)
        if hit is None:
            hit = bool(find_embeddings(self.b, self.m, limit=1, fixed={self.b1: a, self.b2: c}))
            self._linked[key] = hit
        return hit

    def holds(self, a: int, b: int) -> bool:
        if self.m.pg.theta((b,), a):
            return True
        return any(self.xi0(a, z) and self.xi0(b, z) for z in self.m.points)
