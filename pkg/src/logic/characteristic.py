"""
Characteristic formulas of finite structures.

χ_A(x_1..x_α) holds of a tuple exactly when a_i -> x_i is an embedding:
the points are distinct, closure is preserved, every relation holds in both
directions and (optionally) the colours agree.

DESIGN DECISION: Closure literals use independent subsets only.
θ(x_S, x_i) is listed for every independent S ⊆ A with |S| ≤ rank(A); a
dependent S has the same closure as a basis of it, and the positive
literals of that basis already force the same dependency in the image.
"""

from itertools import combinations, product
from typing import Optional, Sequence

from src.errors import PreconditionError
from src.logic.formula import Colour, Eq, Formula, Rel, Theta, Var, conj, exists, neg
from src.structures.structure import AnyStructure, ColouredStructure, relational_part


def default_variables(n: int, prefix: str = "x") -> list[Var]:
    return [f"{prefix}{i}" for i in range(1, n + 1)]


def characteristic_formula(
    a: AnyStructure,
    variables: Optional[Sequence[Var]] = None,
    enumeration: Optional[Sequence[int]] = None,
    colours: bool = True,
) -> Formula:
    """
    χ_A over `variables` (x1..xα by default) for the enumeration of A's
    points (ascending by default).

    Colour literals are added when a is coloured and `colours` is set.

    Raises:
        PreconditionError: the enumeration is not a listing of A's points, or
            the variable count does not match
    """
    order = list(enumeration) if enumeration is not None else list(a.points)
    if sorted(order) != list(a.points):
        raise PreconditionError("Enumeration must list every point of the structure once")
    names = list(variables) if variables is not None else default_variables(len(order))
    if len(names) != len(order) or len(set(names)) != len(names):
        raise PreconditionError(f"Need {len(order)} distinct variables, got {names}")
    pg = a.pg
    rel = relational_part(a)
    literals: list[Formula] = []

    for i, j in combinations(range(len(order)), 2):
        literals.append(neg(Eq(names[i], names[j])))

    for k in range(0, a.rank + 1):
        for subset in combinations(range(len(order)), k):
            points = [order[s] for s in subset]
            if not pg.is_independent(points):
                continue
            closure = pg.closure(points).points
            args = tuple(names[s] for s in subset)
            for i in range(len(order)):
                if i in subset:
                    continue
                atom = Theta(args, names[i])
                literals.append(atom if order[i] in closure else neg(atom))

    for symbol in a.vocab.symbols:
        for idx in product(range(len(order)), repeat=symbol.arity):
            atom = Rel(symbol.name, tuple(names[i] for i in idx))
            holds = rel.holds(symbol.name, [order[i] for i in idx])
            literals.append(atom if holds else neg(atom))

    if colours and isinstance(a, ColouredStructure) and a.has_colours:
        for i, p in enumerate(order):
            mine = a.colour_of_point(p)
            for c in range(1, a.l + 1):
                atom = Colour(c, names[i])
                literals.append(atom if c == mine else neg(atom))

    return conj(*literals)


def existential_closure(f: Formula, keep: Sequence[Var]) -> Formula:
    """∃ over every free variable of f except `keep`, in sorted order."""
    return exists(sorted(f.free - set(keep)), f)
