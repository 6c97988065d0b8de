"""
First-order formulas, their evaluation, and the sentence builders.
"""

from src.logic.axioms import (
    TheorySentences,
    build_eta,
    build_extension_axiom,
    build_phi1,
    build_phi2,
    build_pre_sentences,
    build_psi,
    build_theory_sentences,
    build_zeta,
    colourable_members,
)
from src.logic.characteristic import characteristic_formula, existential_closure
from src.logic.evaluator import BudgetExceeded, EvalBudget, EvalResult, evaluate, solutions
from src.logic.formula import (
    BOTTOM,
    TOP,
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
    conj,
    disj,
    exists,
    forall,
    free_vars,
    is_existential,
    is_forall_exists,
    is_quantifier_free,
    is_universal,
    neg,
    rename_free,
    size,
)
from src.logic.sexpr import parse_sexpr, pretty, to_sexpr
from src.logic.xi import (
    StrongXiOracle,
    WeakXiOracle,
    build_weak_xi,
    build_xi_strong,
    xi_strong_holds,
)

__all__ = [
    # Syntax
    "Formula",
    "Top",
    "Bottom",
    "TOP",
    "BOTTOM",
    "Eq",
    "Theta",
    "Rel",
    "Colour",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "Exists",
    "Forall",
    "conj",
    "disj",
    "exists",
    "forall",
    "neg",
    "free_vars",
    "rename_free",
    "is_quantifier_free",
    "is_existential",
    "is_universal",
    "is_forall_exists",
    "size",
    # Text
    "parse_sexpr",
    "pretty",
    "to_sexpr",
    # Evaluation
    "BudgetExceeded",
    "EvalBudget",
    "EvalResult",
    "evaluate",
    "solutions",
    # Builders
    "characteristic_formula",
    "existential_closure",
    "build_xi_strong",
    "build_weak_xi",
    "StrongXiOracle",
    "WeakXiOracle",
    "xi_strong_holds",
    "build_zeta",
    "build_eta",
    "build_extension_axiom",
    "build_phi1",
    "build_phi2",
    "build_psi",
    "build_pre_sentences",
    "build_theory_sentences",
    "colourable_members",
    "TheorySentences",
]
