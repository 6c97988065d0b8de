"""
Tests for the colouring package.

The solver is cross-checked against brute force over every flat colouring
(validate_colouring_fn as the oracle) on all structures of the plane.
"""

from itertools import combinations, product

import pytest

from src.colouring import (
    ConstraintKind,
    build_csp,
    canonical_colourings,
    chromatic_min,
    count_colourings_up_to_perm,
    find_c0_and_build_B,
    find_colouring,
    iter_colourings,
    maximal_mono_flats,
    min_ramsey_dim,
    needs_all_colours,
    same_colour_all,
    same_colour_classes,
)
from src.colouring.search import find_U, shrink_to_witness
from src.errors import DomainError, PreconditionError, ResourceCapExceeded
from src.models.pregeometry import PregeometryKind, PregeometrySpec
from src.models.structure import ColourRule
from src.structures import RelStructure, enumerate_coloured
from src.structures.witness import build_witness_B_strong
from src.validation import validate, validate_colouring_fn
from tests.conftest import linear


LINEAR_GF2 = PregeometrySpec(kind=PregeometryKind.LINEAR, q=2, rank=1)


def brute_colourings(base, l, strong=False, rule=ColourRule.CLOSURE):
    return [
        g for g in product(range(1, l + 1), repeat=base.pg.flat_count)
        if validate_colouring_fn(base, g, l, strong, rule)
    ]


def relabel(g):
    names: dict[int, int] = {}
    return tuple(names.setdefault(c, len(names) + 1) for c in g)


@pytest.fixture
def plane_bases(plane, symmetric_vocab):
    """Every relational structure that some 2-colouring of the plane admits."""
    return sorted({m.base for m in enumerate_coloured(plane, symmetric_vocab, 2)}, key=repr)


class TestBuildCSP:
    """Tuples to flat constraints."""

    def test_no_relations(self, plane, binary_vocab):
        """Nothing related, nothing constrained."""
        csp = build_csp(RelStructure(plane, binary_vocab), 2)
        assert csp.constraints == ()
        assert csp.variables == (0, 1, 2)

    def test_weak_plane(self, plane, binary_vocab):
        """One NotAllEqual over the three flats of the plane."""
        csp = build_csp(RelStructure(plane, binary_vocab, {"R": [(1, 2), (2, 1)]}), 2)
        assert len(csp.constraints) == 1
        (c,) = csp.constraints
        assert c.kind == ConstraintKind.NOT_ALL_EQUAL
        assert c.flats == (0, 1, 2)

    def test_strong_plane(self, plane, binary_vocab):
        """Strong mode asks for AllDifferent; three flats exceed l = 2."""
        s = RelStructure(plane, binary_vocab, {"R": [(1, 2)]})
        csp = build_csp(s, 2, strong=True)
        assert csp.constraints[0].kind == ConstraintKind.ALL_DIFFERENT
        assert csp.is_trivially_unsat
        assert not csp.with_l(3).is_trivially_unsat

    def test_tuple_rule_uses_entries(self, plane, binary_vocab):
        """Under the tuple rule only the entries' flats are constrained."""
        csp = build_csp(RelStructure(plane, binary_vocab, {"R": [(1, 2)]}), 2, colour_rule=ColourRule.TUPLE)
        assert csp.constraints[0].flats == (0, 1)

    def test_rank_one_tuple_is_a_marker(self, plane, binary_vocab):
        """R(0, 1) can never be admissible."""
        csp = build_csp(RelStructure(plane, binary_vocab, {"R": [(0, 1)]}), 2)
        assert csp.is_trivially_unsat
        assert csp.constraints == ()


class TestFindColouring:
    """Existence of colourings."""

    def test_empty_relations(self, plane, binary_vocab):
        """All flats get colour 1."""
        assert find_colouring(RelStructure(plane, binary_vocab), 2) == (1, 1, 1)

    def test_pigeonhole(self, plane, binary_vocab):
        """Three flats cannot be pairwise different in two colours."""
        s = RelStructure(plane, binary_vocab, {"R": [(1, 2)]})
        assert find_colouring(s, 2, strong=True) is None

    def test_strong_three_colours(self, plane, binary_vocab):
        """The first bijective colouring is returned."""
        s = RelStructure(plane, binary_vocab, {"R": [(1, 2)]})
        assert find_colouring(s, 3, strong=True) == (1, 2, 3)

    def test_substructure_colours_only_its_flats(self, cube, binary_vocab):
        """Flats outside the universe stay 0."""
        s = RelStructure(cube, binary_vocab, {"R": [(1, 2)]}, cube.closure([1, 2]))
        g = find_colouring(s, 2)
        assert g is not None
        assert g[3:] == (0, 0, 0, 0)
        assert validate_colouring_fn(s, g, 2)

    def test_results_are_valid(self, plane_bases):
        """Every returned colouring passes the independent checker."""
        for base in plane_bases:
            for strong in (False, True):
                for l in (2, 3):
                    g = find_colouring(base, l, strong)
                    expected = bool(brute_colourings(base, l, strong))
                    assert (g is not None) == expected
                    if g is not None:
                        assert validate_colouring_fn(base, g, l, strong)

    def test_node_cap(self, plane, binary_vocab):
        """The solver stops at max_nodes."""
        with pytest.raises(ResourceCapExceeded) as info:
            find_colouring(RelStructure(plane, binary_vocab), 2, max_nodes=1)
        assert info.value.cap_name == "max_solver_nodes"


class TestCounting:
    """Colourings and their colour-permutation orbits."""

    def test_free_plane(self, plane, binary_vocab):
        """8 colourings, 4 orbits."""
        s = RelStructure(plane, binary_vocab)
        assert len(list(iter_colourings(s, 2))) == 8
        assert count_colourings_up_to_perm(s, 2).count == 4

    def test_single_orbit(self, plane, binary_vocab):
        """All bijections are one orbit."""
        s = RelStructure(plane, binary_vocab, {"R": [(1, 2)]})
        assert count_colourings_up_to_perm(s, 3, strong=True).count == 1

    def test_uncolourable(self, plane, binary_vocab):
        """No colouring, no orbit."""
        s = RelStructure(plane, binary_vocab, {"R": [(0, 1)]})
        assert count_colourings_up_to_perm(s, 2).count == 0

    def test_cap_gives_lower_bound(self, cube, binary_vocab):
        """Past the cap the count is only a lower bound."""
        result = count_colourings_up_to_perm(RelStructure(cube, binary_vocab), 2, cap=5)
        assert not result.exact
        assert str(result) == ">=5"

    @pytest.mark.parametrize("l", [2, 3])
    def test_against_brute_force(self, plane_bases, l):
        """Orbit counts and full counts match brute force."""
        for base in plane_bases:
            brute = brute_colourings(base, l)
            assert sorted(iter_colourings(base, l)) == sorted(brute)
            assert count_colourings_up_to_perm(base, l).count == len({relabel(g) for g in brute})


class TestSameColour:
    """The same-colour-in-every-colouring oracle."""

    def test_same_flat(self, binary_vocab):
        """Points 1 and 2 of GF(3)^1 share their flat."""
        s = RelStructure(linear(3, 1), binary_vocab)
        assert same_colour_all(s, 1, 2, 2)

    def test_free_points(self, plane, binary_vocab):
        """Without relations nothing is forced."""
        assert not same_colour_all(RelStructure(plane, binary_vocab), 1, 2, 2)

    def test_strong_witness_forces_equal_colours(self):
        """The witness relations alone force a and b together."""
        w = build_witness_B_strong(LINEAR_GF2, 3)
        assert same_colour_all(w.structure.base, w.a, w.b, 3, strong=True)
        assert not same_colour_all(w.structure.base, w.a, w.vs[0], 3, strong=True)

    def test_uncolourable(self, plane, binary_vocab):
        """Questions about uncolourable structures are refused."""
        s = RelStructure(plane, binary_vocab, {"R": [(0, 1)]})
        with pytest.raises(DomainError):
            same_colour_all(s, 1, 2, 2)

    def test_empty_closure_point(self, plane, binary_vocab):
        """Points of closure(∅) have no colour."""
        with pytest.raises(PreconditionError, match="closure"):
            same_colour_all(RelStructure(plane, binary_vocab), 0, 1, 2)

    @pytest.mark.parametrize("strong,l", [(False, 2), (False, 3), (True, 3)])
    def test_classes_against_brute_force(self, plane_bases, strong, l):
        """Classes match the colourings and there are at most l of them."""
        for base in plane_bases:
            brute = brute_colourings(base, l, strong)
            if not brute:
                continue
            classes = same_colour_classes(base, l, strong)
            assert len(classes) <= l
            for i, j in combinations(range(3), 2):
                together = any(i in c and j in c for c in classes)
                assert together == all(g[i] == g[j] for g in brute)
                assert together == same_colour_all(base, i + 1, j + 1, l, strong)

    def test_unique_colouring_classes(self, plane, binary_vocab):
        """One orbit: the classes are the colour classes."""
        s = RelStructure(plane, binary_vocab, {"R": [(1, 2)]})
        assert count_colourings_up_to_perm(s, 3, strong=True).count == 1
        assert same_colour_classes(s, 3, strong=True) == [[0], [1], [2]]


class TestChromaticMin:
    """Least number of colours."""

    def test_empty(self, plane, binary_vocab):
        assert chromatic_min(RelStructure(plane, binary_vocab)) == 1

    def test_one_nae(self, plane, binary_vocab):
        assert chromatic_min(RelStructure(plane, binary_vocab, {"R": [(1, 2)]})) == 2

    def test_strong_triple(self, plane, binary_vocab):
        """AllDifferent over three flats needs three colours."""
        s = RelStructure(plane, binary_vocab, {"R": [(1, 2)]})
        assert chromatic_min(s, strong=True) == 3
        assert chromatic_min(s, strong=True, l_max=2) is None
        assert needs_all_colours(s, 3, strong=True)
        assert not needs_all_colours(s, 4, strong=True)

    def test_fano_lines(self, cube, binary_vocab):
        """Relating a pair on every plane of GF(2)^3 needs three colours (Fano is not 2-colourable)."""
        pairs = [f.basis for f in cube.flats_of_rank(2)]
        assert chromatic_min(RelStructure(cube, binary_vocab, {"R": pairs})) == 3


class TestMonochromatic:
    """Maximal monochromatic flats."""

    def test_monochromatic_plane(self, plane):
        """The whole plane is the only maximal flat."""
        report = maximal_mono_flats(plane, [1, 1, 1])
        assert report.t_c == 1
        assert report.e == 2
        assert report.flats[0].points == [0, 1, 2, 3]

    def test_multichromatic_plane(self, plane):
        """No rank-2 monochromatic flat."""
        report = maximal_mono_flats(plane, [1, 1, 2])
        assert report.t_c == 0
        assert report.e == 0

    def test_single_plane_in_cube(self, cube):
        """Points 1, 2, 3 in colour 1, the rest in colour 2."""
        report = maximal_mono_flats(cube, [1, 1, 1, 2, 2, 2, 2])
        assert [f.basis for f in report.flats] == [[1, 2]]
        assert report.e == 2

    def test_incomplete_colouring(self, plane):
        with pytest.raises(DomainError):
            maximal_mono_flats(plane, [1, 0, 2])

    def test_maximality_exhaustive(self, cube):
        """Reported flats are incomparable and cover every monochromatic plane."""
        planes = cube.flats_of_rank(2)
        for colouring in canonical_colourings(cube.flat_count, 2):
            report = maximal_mono_flats(cube, colouring)
            reported = [set(f.points) for f in report.flats]
            for a, b in combinations(reported, 2):
                assert not a <= b and not b <= a
            for p in planes:
                if len({colouring[i] for i in cube.flat_indices_in(p.points)}) == 1:
                    assert any(p.points <= w for w in reported)


class TestCanonicalColourings:
    """Colourings up to relabelling."""

    def test_small(self):
        assert list(canonical_colourings(3, 2)) == [(1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2)]

    def test_counts(self):
        """Set partitions of 4 elements into at most 3 blocks: 1 + 7 + 6."""
        assert len(list(canonical_colourings(4, 3))) == 14
        assert list(canonical_colourings(4, 1)) == [(1, 1, 1, 1)]


class TestRamsey:
    """The desk-scale Ramsey dimension probe."""

    def test_two_colours_over_gf2(self):
        """Some 2-colouring of the plane avoids, none of GF(2)^3 does."""
        result = min_ramsey_dim(2, 2, n_max=4)
        assert result.min_dim == 3
        assert result.levels[0].avoiding_colouring == [1, 1, 2]

    def test_one_colour(self):
        assert min_ramsey_dim(2, 1).min_dim == 2

    def test_unknown_below_threshold(self):
        """n_max = 2 cannot settle it."""
        result = min_ramsey_dim(2, 2, n_max=2)
        assert result.min_dim is None
        assert result.status == "unknown"

    def test_cap_marks_level_incomplete(self):
        result = min_ramsey_dim(2, 2, n_max=3, cap=2)
        assert result.min_dim is None
        assert not result.levels[-1].complete

    def test_deterministic(self):
        assert min_ramsey_dim(2, 2, n_max=3) == min_ramsey_dim(2, 2, n_max=3)


class TestWeakWitness:
    """The c0 / B construction."""

    def test_cube_two_colours(self, cube, binary_vocab):
        """c0 has a single monochromatic plane and colours B."""
        w = find_c0_and_build_B(cube, 2, binary_vocab)
        assert w.report.e == 2
        assert w.report.t_c == 1
        assert validate(w.coloured(2)) == []
        assert cube.is_independent((w.b1, w.b2))
        wall = set(w.report.flats[0].points)
        assert {w.b1, w.b2} <= wall
        assert all(not set(t) <= wall for _, t in w.structure.all_tuples())

    def test_one_colour(self, plane, binary_vocab):
        """A single colour: W is the whole plane and B has no tuples."""
        w = find_c0_and_build_B(plane, 1, binary_vocab)
        assert w.report.flats[0].points == [0, 1, 2, 3]
        assert not w.structure.has_relations()

    def test_rank_too_small(self, binary_vocab):
        """A line has no rank-2 flat at all."""
        with pytest.raises(DomainError, match="raise the rank"):
            find_c0_and_build_B(linear(2, 1), 2, binary_vocab)


class TestSearch:
    """Randomised search for structures that need all colours."""

    def test_weak_two_colours(self, binary_vocab):
        u = find_U(LINEAR_GF2, 2, binary_vocab, seed=7)
        assert u is not None
        assert chromatic_min(u) == 2

    def test_strong_three_colours(self, binary_vocab):
        u = find_U(LINEAR_GF2, 3, binary_vocab, strong=True, seed=7)
        assert u is not None
        assert chromatic_min(u, strong=True) == 3

    def test_shrink(self, plane, symmetric_vocab):
        """Two of three pairs are redundant for needing two colours."""
        u = RelStructure(plane, symmetric_vocab, {"R": [(1, 2), (1, 3), (2, 3)]})
        shrunk = shrink_to_witness(u, 2)
        assert shrunk.stored("R") == frozenset({(2, 3)})
        assert chromatic_min(shrunk) == 2
