"""
Builders for the sentences of the limit theory.

    ζ_γ(x̄)      the colour pattern of γ on A, expressed through ξ
    η_n(x̄)      {x_1..x_n} is a closed set
    extension   ∀x̄ [χ_A ∧ η ∧ ζ_γ↾A → ∃ȳ (χ_B ∧ η ∧ ζ_γ)] for every colouring γ of B
    φ1          ξ is an equivalence relation off cl(∅)
    φ2          U occurs, with l pairwise ξ-inequivalent points covering everything
    ψ_n         every closed set of size s(n) carries a member of C_n
    T_pre       permutation invariance of θ_n (the pregeometry oracle supplies the rest)

ξ enters as a formula with free variables x, y and is instantiated by
capture-avoiding renaming.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Mapping, Optional, Sequence

import structlog

from src.colouring.solver import iter_colourings
from src.errors import PreconditionError
from src.logic.characteristic import characteristic_formula, default_variables
from src.logic.formula import (
    Eq,
    Formula,
    Iff,
    Implies,
    Theta,
    Var,
    conj,
    disj,
    exists,
    forall,
    fresh_name,
    neg,
    rename_free,
)
from src.models.structure import ColourRule, Vocabulary
from src.pregeometry import Flat, Pregeometry
from src.structures.enumerate import enumerate_coloured
from src.structures.operations import closed_substructure, forget_colours
from src.structures.structure import AnyStructure, RelStructure

logger = structlog.get_logger(__name__)


def _xi_at(xi: Formula, a: Var, b: Var) -> Formula:
    extra = xi.free - {"x", "y"}
    if extra:
        raise PreconditionError(f"ξ may only have free variables x, y; found {sorted(extra)}")
    return rename_free(xi, {"x": a, "y": b})


# =============================================================================
# ζ and η
# =============================================================================

def build_zeta(
    a: AnyStructure,
    gamma: Sequence[int],
    xi: Formula,
    variables: Optional[Sequence[Var]] = None,
    enumeration: Optional[Sequence[int]] = None,
) -> Formula:
    """
    ζ_γ over the enumeration of A (ascending by default).

    `gamma` is a flat colour vector in pg flat order. Points in cl(∅) get
    θ_0, the others ¬θ_0; pairs outside cl(∅) get ξ when γ gives them the
    same colour and ¬ξ otherwise.

    Each unordered pair is conjoined once, as (x_i, x_j) with i < j. ξ is
    symmetric and reflexive on every structure it is used with, so the
    remaining ordered pairs add nothing.
    """
    pg = a.pg
    order = list(enumeration) if enumeration is not None else list(a.points)
    names = list(variables) if variables is not None else default_variables(len(order))
    if len(names) != len(order):
        raise PreconditionError(f"Need {len(order)} variables, got {len(names)}")
    if len(gamma) != pg.flat_count:
        raise PreconditionError(f"Expected {pg.flat_count} flat colours, got {len(gamma)}")
    colour: list[Optional[int]] = []
    for p in order:
        idx = pg.flat_index_of_point(p)
        colour.append(None if idx is None else int(gamma[idx]))
    parts: list[Formula] = []
    for name, c in zip(names, colour):
        atom = Theta((), name)
        parts.append(atom if c is None else neg(atom))
    for i, j in combinations(range(len(order)), 2):
        if colour[i] is None or colour[j] is None:
            continue
        atom = _xi_at(xi, names[i], names[j])
        parts.append(atom if colour[i] == colour[j] else neg(atom))
    return conj(*parts)


def build_eta(variables: Sequence[Var]) -> Formula:
    """η_n: ∀y (θ_n(x̄, y) → y = x_1 ∨ ... ∨ y = x_n)."""
    xs = tuple(variables)
    y = fresh_name("y", xs)
    return forall((y,), Implies(Theta(xs, y), disj(*(Eq(y, x) for x in xs))))


# =============================================================================
# Extension axioms
# =============================================================================

def build_extension_axiom(
    b: RelStructure,
    a_flat: Flat,
    l: int,
    xi: Formula,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> Formula:
    """
    The l-colour compatible extension axiom of (B, A): one ∀∃ instance per
    colour-class pattern of the colourings of B.

    Colourings that differ by a permutation of colours give the same ζ, so
    only canonical representatives are expanded.

    Raises:
        PreconditionError: A is not a closed subset of B, or B has no
            (strong) l-colouring
    """
    if not a_flat.points <= b.point_set or not b.pg.is_closed(a_flat.points):
        raise PreconditionError("A must be a closed subset of B")
    a = closed_substructure(b, a_flat)
    a_points = list(a.points)
    extra = [p for p in b.points if p not in a_flat.points]
    xs = default_variables(len(a_points), "x")
    ys = default_variables(len(extra), "y")
    enumeration = a_points + extra
    chi_a = characteristic_formula(a, xs, a_points)
    chi_b = characteristic_formula(b, xs + ys, enumeration)
    eta_a = build_eta(xs)
    eta_b = build_eta(xs + ys)

    instances: dict[Formula, None] = {}
    for gamma in iter_colourings(b, l, strong, colour_rule, canonical=True):
        premise = conj(chi_a, eta_a, build_zeta(a, gamma, xi, xs, a_points))
        conclusion = exists(ys, conj(chi_b, eta_b, build_zeta(b, gamma, xi, xs + ys, enumeration)))
        instances[forall(xs, Implies(premise, conclusion))] = None
    if not instances:
        raise PreconditionError(f"B has no {'strong ' if strong else ''}{l}-colouring")
    logger.debug("extension_axiom_built", rank_b=b.rank, rank_a=a_flat.rank, instances=len(instances))
    return conj(*instances)


# =============================================================================
# The theory
# =============================================================================

def build_phi1(xi: Formula) -> Formula:
    """ξ is reflexive, symmetric and transitive on points outside cl(∅)."""
    outside = conj(*(neg(Theta((), v)) for v in ("x", "y", "z")))
    body = conj(
        _xi_at(xi, "x", "x"),
        Implies(_xi_at(xi, "x", "y"), _xi_at(xi, "y", "x")),
        Implies(conj(_xi_at(xi, "x", "y"), _xi_at(xi, "y", "z")), _xi_at(xi, "x", "z")),
    )
    return forall(("x", "y", "z"), Implies(outside, body))


def build_phi2(u: AnyStructure, xi: Formula, l: int) -> Formula:
    """
    ∃x̄ (χ_U(x̄) ∧ ⋁_{|I|=l} [x_i ∉ cl(∅) for i ∈ I, ¬ξ(x_i, x_j) for
    i ≠ j in I, and every y is in cl(∅) or ξ-linked to some x_i]).
    """
    xs = default_variables(len(u.points))
    if l > len(xs):
        raise PreconditionError(f"U has {len(xs)} points, fewer than l={l}")
    chi = characteristic_formula(u, xs, colours=False)
    y = fresh_name("y", xs)
    choices: list[Formula] = []
    for subset in combinations(xs, l):
        cover = forall((y,), disj(Theta((), y), *(_xi_at(xi, y, x) for x in subset)))
        choices.append(conj(
            *(neg(Theta((), x)) for x in subset),
            *(neg(_xi_at(xi, x1, x2)) for x1 in subset for x2 in subset if x1 != x2),
            cover,
        ))
    return exists(xs, conj(chi, disj(*choices)))


def build_psi(members: Sequence[RelStructure]) -> Formula:
    """
    ψ_n: every closed set of s(n) distinct points carries one of the given
    structures (all on the same rank-n universe) in some order.
    """
    if not members:
        raise PreconditionError("ψ_n needs the members of C_n")
    size = len(members[0].points)
    if any(len(m.points) != size for m in members):
        raise PreconditionError("Members of C_n must share one universe size")
    xs = default_variables(size)
    distinct = conj(*(neg(Eq(a, b)) for a, b in combinations(xs, 2)))
    options: dict[Formula, None] = {}
    for m in members:
        for perm in permutations(xs):
            options[characteristic_formula(m, list(perm), colours=False)] = None
    return forall(xs, Implies(conj(distinct, build_eta(xs)), disj(*options)))


def build_pre_sentences(max_n: int) -> dict[int, Formula]:
    """∀x̄∀y (θ_n(x̄, y) ↔ θ_n(x_π, y)) for 2 <= n <= max_n."""
    out: dict[int, Formula] = {}
    for n in range(2, max_n + 1):
        xs = default_variables(n)
        base = Theta(tuple(xs), "y")
        body = conj(*(
            Iff(base, Theta(tuple(p), "y"))
            for p in permutations(xs)
            if list(p) != xs
        ))
        out[n] = forall((*xs, "y"), body)
    return out


def colourable_members(
    pg: Pregeometry,
    vocab: Vocabulary,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
    cap: Optional[int] = None,
) -> list[RelStructure]:
    """C_n (or S_n when strong): the distinct relational parts of K_n."""
    seen: dict[RelStructure, None] = {}
    for m in enumerate_coloured(pg, vocab, l, strong, colour_rule, cap):
        seen.setdefault(forget_colours(m), None)
    return list(seen)


@dataclass
class TheorySentences:
    """φ1, φ2 and the ψ_n for the catalogued n; T_pre stays with the pregeometry."""

    phi1: Formula
    phi2: Formula
    psi: dict[int, Formula] = field(default_factory=dict)
    pre: dict[int, Formula] = field(default_factory=dict)

    def labelled(self) -> list[tuple[str, Formula]]:
        out = [("phi1", self.phi1), ("phi2", self.phi2)]
        out.extend((f"psi_{n}", f) for n, f in sorted(self.psi.items()))
        out.extend((f"pre_{n}", f) for n, f in sorted(self.pre.items()))
        return out


def build_theory_sentences(
    u: AnyStructure,
    xi: Formula,
    l: int,
    catalog: Optional[Mapping[int, Sequence[RelStructure]]],
    pre_max_n: int = 0,
) -> TheorySentences:
    """
    Raises:
        PreconditionError: no catalog of C_n was supplied
    """
    if not catalog:
        raise PreconditionError("build_theory_sentences needs a catalog of C_n for small n")
    return TheorySentences(
        phi1=build_phi1(xi),
        phi2=build_phi2(u, xi, l),
        psi={n: build_psi(members) for n, members in catalog.items()},
        pre=build_pre_sentences(pre_max_n),
    )
