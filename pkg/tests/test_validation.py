"""
Tests for the two-stage colouring validator.
"""

import numpy as np
import pytest

from src.errors import PreconditionError
from src.models.structure import ColourRule
from src.structures import ColouredStructure, RelStructure, enumerate_coloured, reduct_dim
from src.validation import StructureValidator, is_valid, validate, validate_colouring_fn
from tests.conftest import coloured, linear


def conditions(violations):
    return sorted({v.condition for v in violations})


class TestStructuralStage:
    """Conditions (1) and (3)."""

    def test_single_colour_without_relations(self, plane):
        """Relation-free structures only need a colour per flat."""
        assert validate(coloured(plane, [1, 1, 1])) == []

    def test_colour_on_empty_closure(self, plane, binary_vocab):
        """closure(∅) must stay uncoloured."""
        m = ColouredStructure(RelStructure(plane, binary_vocab), 2, [1, 1, 1, 2])
        violations = validate(m)
        assert conditions(violations) == [1]
        assert violations[0].points == [0]

    def test_uncoloured_point(self, plane, binary_vocab):
        """Every point outside closure(∅) needs a colour."""
        m = ColouredStructure(RelStructure(plane, binary_vocab), 2, [0, 1, 0, 2])
        violations = validate(m)
        assert conditions(violations) == [1]
        assert violations[0].points == [2]

    def test_dependent_points_differ(self, binary_vocab):
        """Points 1 and 2 of GF(3)^1 span the same flat."""
        pg = linear(3, 1)
        m = ColouredStructure(RelStructure(pg, binary_vocab), 2, [0, 1, 2])
        violations = validate(m)
        assert conditions(violations) == [3]
        assert violations[0].points == [1, 2]

    def test_colour_outside_substructure_universe(self, plane, binary_vocab):
        """A substructure may not colour points it does not contain."""
        base = RelStructure(plane, binary_vocab, {}, plane.closure([1]))
        m = ColouredStructure(base, 2, [0, 1, 2, 0])
        assert conditions(validate(m)) == [1]

    def test_zero_reduct_must_be_colour_free(self, plane, binary_vocab):
        """The 0-reduct carries no colours."""
        m = ColouredStructure(RelStructure(plane, binary_vocab), 2, [0, 1, 1, 1], reduct_level=0)
        violations = validate(m)
        assert conditions(violations) == [1]
        assert "0-reduct" in violations[0].note


class TestRelationalStage:
    """Conditions (2), (4) and (5)."""

    def test_two_colours_in_closure(self, plane):
        """Closure rule: the third flat supplies the second colour."""
        assert validate(coloured(plane, [1, 1, 2], {"R": [(1, 2)]})) == []

    def test_tuple_rule_is_stricter(self, plane):
        """Tuple rule: the entries themselves must differ."""
        m = coloured(plane, [1, 1, 2], {"R": [(1, 2)]})
        violations = validate(m, colour_rule=ColourRule.TUPLE)
        assert conditions(violations) == [4]
        assert violations[0].entries == [1, 2]
        assert validate(coloured(plane, [1, 1, 2], {"R": [(1, 3)]}), colour_rule=ColourRule.TUPLE) == []

    def test_monochromatic_closure(self, plane):
        """One colour on the whole plane blocks every tuple."""
        violations = validate(coloured(plane, [1, 1, 1], {"R": [(1, 2)]}))
        assert conditions(violations) == [4]
        assert violations[0].symbol == "R"

    def test_tuple_in_empty_closure(self, plane):
        """R(0, 0) lies inside closure(∅)."""
        violations = validate(coloured(plane, [1, 1, 2], {"R": [(0, 0)]}))
        assert conditions(violations) == [2]

    def test_rank_one_tuple(self, plane):
        """R(0, 1) spans one flat, hence one colour."""
        assert conditions(validate(coloured(plane, [1, 1, 2], {"R": [(0, 1)]}))) == [4]

    def test_strong_all_distinct(self, plane):
        """Strong 3-colouring: three flats, three colours."""
        m = coloured(plane, [1, 2, 3], {"R": [(1, 2)]}, l=3)
        assert validate(m, strong=True) == []

    def test_strong_repeat(self, plane):
        """Weakly fine, strongly not."""
        m = coloured(plane, [1, 1, 2], {"R": [(1, 2)]}, l=3)
        assert validate(m) == []
        violations = validate(m, strong=True)
        assert conditions(violations) == [5]
        assert violations[0].points == [1, 2]

    def test_reduct_level_bounds_tuple_dimension(self, plane, binary_vocab):
        """A 1-reduct cannot hold a rank-2 tuple."""
        m = coloured(plane, [1, 1, 2], {"R": [(1, 2)]})
        bad = ColouredStructure(m.base, 2, m.point_colours, reduct_level=1)
        violations = validate(bad)
        assert conditions(violations) == [4]
        assert "exceeds reduct level" in violations[0].note

    def test_report_cap(self, cube):
        """At most max_reported violations per condition."""
        m = coloured(cube, [1] * 7, {"R": [(1, 2), (1, 4), (2, 4), (3, 4)]})
        report = StructureValidator(max_reported=2).validate(m)
        assert report.violation_count == 2
        assert report.conditions == [4]


class TestReducts:
    """Reducts of valid structures are valid."""

    @pytest.mark.parametrize("d", [0, 1, 2])
    def test_reducts_validate(self, cube, d):
        m = coloured(cube, [1, 2, 1, 2, 1, 2, 2], {"R": [(1, 2), (4, 5), (1, 6)]})
        assert validate(reduct_dim(m, d)) == []


class TestColouringFunction:
    """validate_colouring_fn against the structure validator."""

    def test_agrees_on_every_plane_structure(self, plane, symmetric_vocab):
        """Cross-check on all of K_2 re-coloured by every colouring."""
        structures = enumerate_coloured(plane, symmetric_vocab, 2)
        colourings = sorted({s.colouring for s in structures})
        for s in structures[::5]:
            for gamma in colourings:
                recoloured = ColouredStructure.from_flat_colours(s.base, 2, gamma)
                for strong in (False, True):
                    for rule in ColourRule:
                        expected = is_valid(recoloured, strong, rule)
                        assert validate_colouring_fn(s.base, gamma, 2, strong, rule) == expected

    def test_mapping_form(self, plane):
        """Flats can be given as a mapping."""
        m = coloured(plane, [1, 1, 2], {"R": [(1, 2)]})
        assert validate_colouring_fn(m.base, m.colour_map(), 2)
        assert not validate_colouring_fn(m.base, {f: 1 for f in plane.one_dim_flats()}, 2)

    def test_missing_flat(self, plane, binary_vocab):
        """A colouring must cover every rank-1 flat."""
        s = RelStructure(plane, binary_vocab)
        with pytest.raises(PreconditionError, match="misses"):
            validate_colouring_fn(s, [1, 0, 2], 2)

    def test_colour_above_l(self, plane, binary_vocab):
        """Colours beyond l are simply invalid."""
        s = RelStructure(plane, binary_vocab)
        assert not validate_colouring_fn(s, np.array([1, 2, 3]), 2)
