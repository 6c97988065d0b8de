"""
Tests for formulas, evaluation and the sentence builders.

The ξ oracles are checked against brute-force evaluation of the formulas
they stand for.
"""

from itertools import combinations, product

import pytest

from src.colouring import find_c0_and_build_B
from src.errors import ConfigError, DomainError, PreconditionError
from src.logic import (
    TOP,
    BOTTOM,
    And,
    BudgetExceeded,
    Colour,
    Eq,
    EvalBudget,
    Exists,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Rel,
    StrongXiOracle,
    Theta,
    WeakXiOracle,
    build_eta,
    build_extension_axiom,
    build_phi1,
    build_phi2,
    build_pre_sentences,
    build_psi,
    build_theory_sentences,
    build_weak_xi,
    build_xi_strong,
    build_zeta,
    characteristic_formula,
    colourable_members,
    conj,
    disj,
    evaluate,
    existential_closure,
    is_existential,
    is_forall_exists,
    is_quantifier_free,
    is_universal,
    parse_sexpr,
    pretty,
    rename_free,
    solutions,
    to_sexpr,
)
from src.models.pregeometry import PregeometryKind, PregeometrySpec
from src.models.structure import RelationSymbol, Vocabulary
from src.sampling import sample_coloured, sample_rng
from src.structures import RelStructure, enumerate_coloured, find_embeddings
from src.structures.witness import build_witness_B_strong
from tests.conftest import affine, coloured, linear


LINEAR_GF2 = PregeometrySpec(kind=PregeometryKind.LINEAR, q=2, rank=1)

R_XY = Rel("R", ("x", "y"))


def same_colour_xi(l: int = 2):
    """A colour-atom stand-in for ξ: x and y carry the same colour."""
    return disj(*(conj(Colour(c, "x"), Colour(c, "y")) for c in range(1, l + 1)))


def outside_closure_of_empty(m):
    return [p for p in m.points if not m.pg.theta((), p)]


class TestFormula:
    """Syntax tree helpers."""

    def test_conj_flattens_and_drops_top(self):
        """Nested conjunctions flatten; TOP disappears; BOTTOM absorbs."""
        a, b = Eq("a", "b"), Eq("b", "c")
        assert conj(a, conj(b, TOP)) == And((a, b))
        assert conj() == TOP
        assert conj(a, BOTTOM) == BOTTOM
        assert disj(BOTTOM) == BOTTOM
        assert disj(a) == a

    def test_free_variables(self):
        """Quantifiers bind their variables."""
        assert Exists(("y",), R_XY).free == {"x"}
        assert Forall(("x", "y"), R_XY).free == frozenset()
        assert Theta(("a", "b"), "c").free == {"a", "b", "c"}

    def test_rename_is_simultaneous(self):
        """x and y swap places in one step."""
        assert rename_free(R_XY, {"x": "y", "y": "x"}) == Rel("R", ("y", "x"))

    def test_rename_avoids_capture(self):
        """A bound y is renamed before x becomes y."""
        renamed = rename_free(Exists(("y",), R_XY), {"x": "y"})
        assert renamed == Exists(("y_1",), Rel("R", ("y", "y_1")))
        assert renamed.free == {"y"}

    def test_rename_leaves_bound_variables(self):
        """Only free occurrences change."""
        f = Exists(("x",), R_XY)
        assert rename_free(f, {"x": "z"}) == f

    def test_shapes(self):
        """Quantifier prefix classes."""
        ex = Exists(("y",), R_XY)
        fa_ex = Forall(("x",), ex)
        assert is_quantifier_free(Theta(("x",), "y"))
        assert is_existential(ex) and not is_universal(ex)
        assert is_universal(Not(ex))
        assert is_forall_exists(fa_ex) and not is_existential(fa_ex)
        assert not is_forall_exists(Exists(("x",), Forall(("y",), R_XY)))
        assert is_forall_exists(conj(ex, Not(ex)))


class TestSexpr:
    """Text format."""

    @pytest.mark.parametrize("f", [
        TOP,
        BOTTOM,
        Theta((), "x"),
        Rel("R", ()),
        And(()),
        Colour(3, "v"),
        Iff(Eq("a", "b"), Not(Theta(("a", "c"), "b"))),
        Forall(("x",), Implies(Theta(("x",), "y"), Or((R_XY, Eq("x", "y"))))),
        build_xi_strong(3, 3),
    ])
    def test_round_trip(self, f):
        """parse(print(f)) is f."""
        assert parse_sexpr(to_sexpr(f)) == f

    def test_parse(self):
        """A hand-written sentence."""
        f = parse_sexpr("(exists (x y) (and (rel R x y) (not (theta (x) y))))")
        assert f == Exists(("x", "y"), And((R_XY, Not(Theta(("x",), "y")))))

    @pytest.mark.parametrize("text,message", [
        ("(and (rel R x)", "missing"),
        ("(foo x)", "unknown head"),
        ("(= x)", "takes 2 arguments"),
        ("(rel R x) extra", "trailing"),
        ("(colour one x)", "colour must be a number"),
        ("", "end of input"),
    ])
    def test_malformed(self, text, message):
        """Syntax errors are configuration errors."""
        with pytest.raises(ConfigError, match=message):
            parse_sexpr(text)

    def test_pretty(self):
        """Closure literals read naturally."""
        assert pretty(Not(Theta(("x",), "y"))) == "y ∉ cl(x)"
        assert pretty(Theta((), "x")) == "x ∈ cl(∅)"
        assert pretty(Exists(("y",), R_XY)) == "∃y R(x, y)"


class TestEvaluate:
    """Model checking."""

    def test_zero_vector(self, plane, binary_vocab):
        """Linear spaces have cl(∅) = {0}; affine spaces have cl(∅) = ∅."""
        f = Exists(("x",), Theta((), "x"))
        assert evaluate(RelStructure(plane, binary_vocab), f) is True
        assert evaluate(RelStructure(affine(2, 2), binary_vocab), f) is False

    def test_relation_atoms(self, plane, binary_vocab):
        """Ordered tuples are not symmetric."""
        s = RelStructure(plane, binary_vocab, {"R": [(1, 2)]})
        assert evaluate(s, R_XY, {"x": 1, "y": 2}) is True
        assert evaluate(s, R_XY, {"x": 2, "y": 1}) is False
        f = Forall(("x", "y"), Implies(R_XY, Not(Theta(("x",), "y"))))
        assert evaluate(s, f) is True

    def test_missing_assignment(self, plane, binary_vocab):
        """Free variables need values."""
        with pytest.raises(PreconditionError, match="Free variables"):
            evaluate(RelStructure(plane, binary_vocab), R_XY, {"x": 1})

    def test_colour_atoms_need_colours(self, plane, binary_vocab):
        """P_i(x) on an uncoloured structure is a domain error."""
        with pytest.raises(DomainError, match="coloured"):
            evaluate(RelStructure(plane, binary_vocab), Exists(("x",), Colour(1, "x")))

    def test_colour_atoms(self, plane):
        """Colours come from the structure's flats."""
        m = coloured(plane, [1, 2, 2])
        assert evaluate(m, Colour(1, "x"), {"x": 1}) is True
        assert evaluate(m, Colour(1, "x"), {"x": 3}) is False

    def test_assignment_budget(self, plane, binary_vocab):
        """Running out of assignments is a value."""
        f = Forall(("x", "y"), Eq("x", "x"))
        result = evaluate(RelStructure(plane, binary_vocab), f, budget=EvalBudget(3, 16))
        assert isinstance(result, BudgetExceeded)
        assert result.limit_name == "max_assignments"
        with pytest.raises(TypeError):
            bool(result)

    def test_expansion_budget(self, plane, binary_vocab):
        """Blocks wider than max_quantifier_expansion are refused."""
        f = Exists(("x", "y"), TOP)
        result = evaluate(RelStructure(plane, binary_vocab), f, budget=EvalBudget(100, 1))
        assert isinstance(result, BudgetExceeded)
        assert result.limit_name == "max_quantifier_expansion"

    def test_connective_laws(self, plane, binary_vocab):
        """¬, ∧ and ∨ behave like their Boolean counterparts."""
        sentences = [
            Exists(("x", "y"), R_XY),
            Forall(("x",), Theta((), "x")),
            Exists(("x", "y"), conj(R_XY, Rel("R", ("y", "x")))),
            Forall(("x",), Exists(("y",), disj(R_XY, Eq("x", "y")))),
        ]
        for m in enumerate_coloured(plane, binary_vocab, 2)[::40]:
            values = [evaluate(m, f) for f in sentences]
            for f, v in zip(sentences, values):
                assert evaluate(m, Not(f)) is (not v)
            for (f, v), (g, w) in combinations(zip(sentences, values), 2):
                assert evaluate(m, And((f, g))) is (v and w)
                assert evaluate(m, Or((f, g))) is (v or w)

    def test_solutions_match_embeddings(self, plane, binary_vocab):
        """Assignments satisfying χ_A in A are the automorphisms of A."""
        a = RelStructure(plane, binary_vocab)
        names = ["x1", "x2", "x3", "x4"]
        found = solutions(a, characteristic_formula(a, names), names)
        expected = find_embeddings(a, a)
        assert len(found) == len(expected) == 6
        as_maps = sorted(tuple(s[v] for v in names) for s in found)
        assert as_maps == sorted(tuple(e[p] for p in a.points) for e in expected)


class TestCharacteristic:
    """χ_A."""

    def test_closure_true_on_itself(self, plane):
        """∃x̄ χ_A holds in A."""
        m = coloured(plane, [1, 2, 2], {"R": [(1, 2)]})
        chi = characteristic_formula(m)
        assert is_quantifier_free(chi)
        assert evaluate(m, existential_closure(chi, [])) is True

    def test_colour_literals(self, plane):
        """Swapped colours break the identity embedding unless colours are ignored."""
        m = coloured(plane, [1, 2, 2])
        other = coloured(plane, [2, 1, 1])
        identity = {"x1": 0, "x2": 1, "x3": 2, "x4": 3}
        assert evaluate(m, characteristic_formula(m), identity) is True
        assert evaluate(other, characteristic_formula(m), identity) is False
        assert evaluate(other, characteristic_formula(m, colours=False), identity) is True

    def test_enumeration_must_cover(self, plane, binary_vocab):
        """A partial enumeration is rejected."""
        with pytest.raises(PreconditionError, match="Enumeration"):
            characteristic_formula(RelStructure(plane, binary_vocab), enumeration=[0, 1, 2])


class TestStrongXi:
    """ξ for strong colourings."""

    def test_variable_counts(self):
        """Witness and filler variables per l and r_1."""
        assert build_xi_strong(3, 2).parts[2].variables == ("y2", "y3")
        assert build_xi_strong(2, 2).parts[2].variables == ("y2",)
        block = build_xi_strong(3, 3).parts[2].variables
        assert block[:2] == ("y2", "y3")
        assert len(block) == 2 + 5 and len(set(block)) == 7
        assert is_existential(build_xi_strong(4, 3))

    def test_bad_parameters(self):
        """l and r_1 are at least 2."""
        with pytest.raises(PreconditionError):
            build_xi_strong(1, 2)

    def test_first_disjuncts(self, plane, binary_vocab):
        """Points of one flat are ξ-related; independent points of an empty structure are not."""
        s = RelStructure(plane, binary_vocab)
        oracle = StrongXiOracle(s, 2)
        assert oracle.holds(1, 1) and oracle.holds(0, 1)
        assert not oracle.holds(1, 2)
        assert evaluate(s, build_xi_strong(2, 2), {"x": 1, "y": 2}) is False

    def test_witness_pair(self):
        """The designated pair of the witness structure is ξ-related."""
        w = build_witness_B_strong(LINEAR_GF2, 3)
        assert StrongXiOracle(w.structure, 3).holds(w.a, w.b)
        assert evaluate(w.structure, build_xi_strong(3, 2), {"x": w.a, "y": w.b}) is True

    def test_oracle_matches_formula(self, plane, cube, binary_vocab):
        """Bitset oracle and quantifier expansion agree on every pair."""
        structures = list(enumerate_coloured(plane, binary_vocab, 2)[::9])
        structures += [sample_coloured(cube, binary_vocab, 2, rng=sample_rng(5, 3, i)) for i in range(6)]
        for l in (2, 3):
            xi = build_xi_strong(l, 2)
            for m in structures:
                oracle = StrongXiOracle(m, l)
                for a, b in product(m.points, repeat=2):
                    assert oracle.holds(a, b) is evaluate(m, xi, {"x": a, "y": b})

    def test_oracle_matches_formula_ternary(self):
        """Filler variables on a symmetric ternary witness."""
        vocab = Vocabulary(symbols=(RelationSymbol(name="S", arity=3),), symmetric_irreflexive=True)
        w = build_witness_B_strong(LINEAR_GF2, 3, vocab)
        m = w.structure
        xi = build_xi_strong(3, 3, "S")
        oracle = StrongXiOracle(m, 3)
        points = [w.a, w.b, *w.vs, 0, m.points[-1]]
        for a, b in product(points, repeat=2):
            assert oracle.holds(a, b) is evaluate(m, xi, {"x": a, "y": b})
        assert oracle.holds(w.a, w.b)

    def test_soundness_on_strong_structures(self, cube, binary_vocab):
        """ξ never links points of different colours in a strongly coloured structure."""
        structures = [build_witness_B_strong(LINEAR_GF2, 3).structure]
        structures += [
            sample_coloured(linear(2, n), binary_vocab, 3, strong=True, rng=sample_rng(11, n, i))
            for n in (3, 4)
            for i in range(5)
        ]
        for m in structures:
            oracle = StrongXiOracle(m, 3)
            outside = outside_closure_of_empty(m)
            for a, b in combinations(outside, 2):
                if oracle.holds(a, b):
                    assert m.colour_of_point(a) == m.colour_of_point(b)


class TestWeakXi:
    """ξ_0 and ξ from a witness B."""

    @pytest.fixture
    def small_b(self, plane, binary_vocab):
        return RelStructure(plane, binary_vocab, {"R": [(1, 2)]})

    def test_shapes(self, small_b):
        """Both formulas are existential in x, y."""
        xi0, xi = build_weak_xi(small_b, 1, 2)
        assert xi0.free == xi.free == {"x", "y"}
        assert is_existential(xi0) and is_existential(xi)

    def test_enumeration_must_start_with_pair(self, small_b):
        """b1, b2 come first."""
        with pytest.raises(PreconditionError, match="begin with b1, b2"):
            build_weak_xi(small_b, 1, 2, enumeration=[0, 1, 2, 3])

    def test_identity_copy(self, small_b):
        """ξ_0(b1, b2) holds in B; the reversed pair does not."""
        xi0, _ = build_weak_xi(small_b, 1, 2)
        assert evaluate(small_b, xi0, {"x": 1, "y": 2}) is True
        assert evaluate(small_b, xi0, {"x": 2, "y": 1}) is False

    def test_too_small_structure(self, binary_vocab, small_b):
        """No copy of B fits in fewer points."""
        xi0, _ = build_weak_xi(small_b, 1, 2)
        line = RelStructure(linear(2, 1), binary_vocab)
        for a, c in product(line.points, repeat=2):
            assert evaluate(line, xi0, {"x": a, "y": c}) is False

    def test_oracle_matches_formula(self, plane, cube, binary_vocab, small_b):
        """Embedding search and quantifier expansion agree."""
        xi0, xi = build_weak_xi(small_b, 1, 2)
        for m in enumerate_coloured(plane, binary_vocab, 2)[::25]:
            oracle = WeakXiOracle(m, small_b, 1, 2)
            for a, b in product(m.points, repeat=2):
                assert oracle.xi0(a, b) is evaluate(m, xi0, {"x": a, "y": b})
                assert oracle.holds(a, b) is evaluate(m, xi, {"x": a, "y": b})
        for i in range(2):
            m = sample_coloured(cube, binary_vocab, 2, rng=sample_rng(3, 3, i))
            oracle = WeakXiOracle(m, small_b, 1, 2)
            for a, b in product(m.points, repeat=2):
                assert oracle.xi0(a, b) is evaluate(m, xi0, {"x": a, "y": b})

    def test_soundness_with_copy_of_b(self, cube):
        """On B coloured by c0, ξ only links equally coloured points."""
        w = find_c0_and_build_B(cube, 2)
        m = w.coloured(2)
        oracle = WeakXiOracle(m, w.structure, w.b1, w.b2)
        assert oracle.xi0(w.b1, w.b2)
        for a, b in combinations(outside_closure_of_empty(m), 2):
            if oracle.holds(a, b):
                assert m.colour_of_point(a) == m.colour_of_point(b)

    def test_vacuous_on_small_structures(self, plane, cube, binary_vocab):
        """Without room for B, ξ is just 'same flat'."""
        w = find_c0_and_build_B(cube, 2)
        for m in enumerate_coloured(plane, binary_vocab, 2)[::30]:
            oracle = WeakXiOracle(m, w.structure, w.b1, w.b2)
            for a, b in product(m.points, repeat=2):
                assert oracle.holds(a, b) is plane.theta((b,), a)


class TestZetaEta:
    """ζ_γ and η_n."""

    def test_eta_on_closed_pair(self, binary_vocab):
        """In affine GF(2) geometry two points form a closed line."""
        aff = affine(2, 3)
        s = RelStructure(aff, binary_vocab)
        eta = build_eta(["x1", "x2"])
        assert is_universal(eta)
        assert evaluate(s, eta, {"x1": 0, "x2": 1}) is True

    def test_eta_on_open_pair(self, plane, binary_vocab):
        """Two independent vectors do not span a 2-point set."""
        s = RelStructure(plane, binary_vocab)
        assert evaluate(s, build_eta(["x1", "x2"]), {"x1": 1, "x2": 2}) is False

    def test_zeta_one_flat(self, binary_vocab):
        """A single flat gives one positive ξ atom."""
        s = RelStructure(linear(3, 1), binary_vocab)
        xi = Rel("S", ("x", "y"))
        zeta = build_zeta(s, [1], xi)
        assert zeta == And((
            Theta((), "x1"),
            Not(Theta((), "x2")),
            Not(Theta((), "x3")),
            Rel("S", ("x2", "x3")),
        ))

    def test_zeta_pattern(self, plane, binary_vocab):
        """Different colours give negated ξ atoms."""
        zeta = build_zeta(RelStructure(plane, binary_vocab), [1, 2, 2], Rel("S", ("x", "y")))
        assert zeta.parts[-1] == Rel("S", ("x3", "x4"))
        assert zeta.parts.count(Not(Rel("S", ("x2", "x3")))) == 1
        assert zeta.parts.count(Not(Rel("S", ("x2", "x4")))) == 1

    def test_zeta_one_atom_per_unordered_pair(self, binary_vocab):
        """Seven non-loop points give 21 ξ atoms, each with ascending indices."""
        cube = linear(2, 3)
        zeta = build_zeta(RelStructure(cube, binary_vocab), [1, 2, 1, 2, 1, 2, 2], Rel("S", ("x", "y")))
        atoms = [p.body if isinstance(p, Not) else p for p in zeta.parts]
        pairs = [a.args for a in atoms if isinstance(a, Rel)]
        assert len(zeta.parts) == 8 + 21
        assert len(pairs) == 21 == len(set(pairs))
        assert all(int(u[1:]) < int(v[1:]) for u, v in pairs)
        assert {frozenset(p) for p in pairs} == {
            frozenset(p) for p in combinations([f"x{i}" for i in range(2, 9)], 2)
        }

    def test_zeta_shape_with_strong_xi(self, plane, binary_vocab):
        """ζ over an existential ξ is ∀∃ but not existential."""
        zeta = build_zeta(RelStructure(plane, binary_vocab), [1, 2, 2], build_xi_strong(2, 2))
        assert is_forall_exists(zeta)
        assert not is_existential(zeta)

    def test_xi_with_extra_variables(self, plane, binary_vocab):
        """ξ may only mention x and y."""
        with pytest.raises(PreconditionError, match="free variables"):
            build_zeta(RelStructure(plane, binary_vocab), [1, 1, 1], Rel("S", ("x", "z")))


class TestExtensionAxiom:
    """Colour compatible extension axioms."""

    def test_rank_one_over_rank_zero(self, plane, binary_vocab):
        """A point outside cl(∅) exists in the plane but not in cl(∅) alone."""
        b = RelStructure(linear(2, 1), binary_vocab)
        axiom = build_extension_axiom(b, b.pg.empty_closure(), 2, same_colour_xi())
        assert evaluate(RelStructure(plane, binary_vocab), axiom) is True
        bottom = RelStructure(plane, binary_vocab, universe=plane.empty_closure())
        assert evaluate(bottom, axiom) is False

    def test_colour_patterns(self, plane, cube, binary_vocab):
        """Every 2-colour pattern of a plane must occur over cl(∅)."""
        b = RelStructure(plane, binary_vocab)
        axiom = build_extension_axiom(b, plane.empty_closure(), 2, same_colour_xi())
        assert len(axiom.parts) == 4
        assert evaluate(coloured(cube, [1, 1, 1, 2, 2, 2, 2]), axiom) is True
        assert evaluate(coloured(plane, [1, 1, 2]), axiom) is False

    def test_a_must_be_inside_b(self, plane, cube, binary_vocab):
        """A flat outside B is rejected."""
        b = RelStructure(plane, binary_vocab)
        with pytest.raises(PreconditionError, match="closed subset"):
            build_extension_axiom(b, cube.closure([4]), 2, same_colour_xi())


class TestTheory:
    """φ1, φ2, ψ_n and T_pre."""

    def test_phi1_same_flat(self, plane, binary_vocab):
        """'Same flat' is an equivalence off cl(∅)."""
        assert evaluate(RelStructure(plane, binary_vocab), build_phi1(Theta(("y",), "x"))) is True

    def test_phi1_fails_for_non_reflexive(self, plane, binary_vocab):
        """R(x, y) is not reflexive."""
        s = RelStructure(plane, binary_vocab, {"R": [(1, 2)]})
        assert evaluate(s, build_phi1(R_XY)) is False

    def test_phi2_on_u(self, plane):
        """U needs both colours, and the colour classes cover everything."""
        u = coloured(plane, [1, 2, 2], {"R": [(1, 2)]})
        phi2 = build_phi2(u, same_colour_xi(), 2)
        assert evaluate(u, phi2) is True
        mono = coloured(plane, [1, 1, 1], {"R": [(1, 2)]})
        assert evaluate(mono, phi2) is False

    def test_psi_single_member(self, plane, binary_vocab):
        """Rank 1 has exactly one colourable structure; ψ_1 checks every closed pair."""
        members = colourable_members(linear(2, 1), binary_vocab, 2)
        assert len(members) == 1
        psi = build_psi(members)
        assert evaluate(members[0], psi) is True
        assert evaluate(RelStructure(plane, binary_vocab), psi) is True
        loop = RelStructure(plane, binary_vocab, {"R": [(1, 1)]})
        assert evaluate(loop, psi) is False

    def test_pre_sentences(self, plane, binary_vocab):
        """θ_n ignores argument order."""
        pre = build_pre_sentences(3)
        assert sorted(pre) == [2, 3]
        s = RelStructure(plane, binary_vocab)
        assert all(evaluate(s, f) is True for f in pre.values())

    def test_theory_needs_catalog(self, plane):
        """ψ_n cannot be built without C_n."""
        u = coloured(plane, [1, 2, 2], {"R": [(1, 2)]})
        with pytest.raises(PreconditionError, match="catalog"):
            build_theory_sentences(u, same_colour_xi(), 2, None)

    def test_theory_labels(self, plane, binary_vocab):
        """Sentences come back labelled."""
        u = coloured(plane, [1, 2, 2], {"R": [(1, 2)]})
        catalog = {1: colourable_members(linear(2, 1), binary_vocab, 2)}
        theory = build_theory_sentences(u, same_colour_xi(), 2, catalog, pre_max_n=2)
        assert [name for name, _ in theory.labelled()] == ["phi1", "phi2", "psi_1", "pre_2"]
