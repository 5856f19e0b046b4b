from __future__ import annotations

import random

import pytest
from hypothesis import given

from rnatopo.diagram import NotTwoBackbones, one_backbone, parse_structure, two_backbones
from rnatopo.shadows import (
    NoExteriorIrreducible,
    crossing_components,
    gamma,
    genus_by_decomposition,
    irreducible_shadows,
    is_gamma_structure,
    is_irreducible,
    is_shadow,
    shadow,
    shadow_arcs,
)
from rnatopo.topology import genus, glue_alpha, product_bullet

from .conftest import diagrams, random_diagram

HYBRID = two_backbones(2, 2, [(1, 3), (2, 4)])


class TestShadow:
    def test_drops_enclosing_arc(self):
        s = shadow(one_backbone(8, [(1, 8), (2, 4), (3, 5)]))
        assert s.n == 4 and s.sorted_arcs == [(1, 3), (2, 4)]

    def test_secondary_structure_vanishes(self):
        s = shadow(parse_structure("((..)).(.)"))
        assert s.arcs == frozenset() and s.b == 1

    def test_collapses_stacks(self):
        d = one_backbone(8, [(1, 6), (2, 5), (3, 8), (4, 7)])
        s = shadow(d)
        assert s.sorted_arcs == [(1, 3), (2, 4)] and genus(s) == genus(d)

    def test_keeps_backbone_count(self):
        assert shadow(parse_structure("((&))")).b == 2

    def test_stack_across_backbones_is_not_collapsed(self):
        # (2,3) and (1,4) are not a stack: 2 and 3 lie on different backbones
        d = parse_structure("([&)]")
        assert shadow_arcs(d) == set(d.arcs)

    @given(diagrams(max_arcs=10))
    def test_idempotent(self, d):
        s = shadow(d)
        assert shadow(s) == s and is_shadow(s)

    @given(diagrams(max_arcs=10, backbones=(1,)))
    def test_preserves_genus_on_one_backbone(self, d):
        assert genus(shadow(d)) == genus(d)

    def test_two_backbone_genus_can_drop(self):
        # an enclosing exterior arc is non-crossing yet carries a handle
        d = two_backbones(2, 4, [(1, 6), (2, 4), (3, 5)])
        assert genus(d) == 1 and genus(shadow(d)) == 0


class TestComponents:
    def test_examples(self):
        assert len(crossing_components(one_backbone(4, [(1, 3), (2, 4)]))) == 1
        assert len(crossing_components(one_backbone(4, [(1, 4), (2, 3)]))) == 2
        assert len(crossing_components(one_backbone(6, [(1, 3), (2, 5), (4, 6)]))) == 1

    def test_single_arc_is_not_irreducible(self):
        assert not is_irreducible(one_backbone(2, [(1, 2)]))


class TestDecomposition:
    def test_crossing_hybrid(self):
        dec = irreducible_shadows(HYBRID)
        assert len(dec.I2_1) == 1 and not dec.I1 and not dec.I2_0

    def test_h_pseudoknot(self):
        dec = irreducible_shadows(one_backbone(4, [(1, 3), (2, 4)]))
        assert len(dec.I1) == 1 and dec.I1[0].genus == 1

    def test_composite_order(self):
        # an H-type pseudoknot on R nested under an enclosing R arc that
        # crosses two exterior arcs, plus a crossing hybrid further in
        d = parse_structure("([.{.]}[.{.]}....)&(..)")
        dec = irreducible_shadows(d)
        labels = [step["class"] for step in dec.trace]
        assert labels[:2] == ["I1", "I1"]
        assert sorted(len(step["removed"]) for step in dec.trace[:2]) == [2, 2]

    def test_trace_layout(self):
        d = parse_structure("([)].((..))[[.{]]}.&.{.}")
        dec = irreducible_shadows(d)
        removed = [tuple(a) for step in dec.trace for a in step["removed"]]
        assert sorted(removed) == sorted(shadow_arcs(d)) == [(1, 3), (2, 4), (12, 17), (15, 18)]
        assert [s["class"] for s in dec.trace] == ["I1", "I1"]

    def test_every_reported_piece_is_irreducible_shadow(self):
        rng = random.Random(4)
        for _ in range(300):
            d = random_diagram(rng, 8)
            for p in irreducible_shadows(d).all:
                assert is_irreducible(p.diagram) and shadow(p.diagram) == p.diagram

    @given(diagrams(max_arcs=10))
    def test_arcs_partition_the_shadow(self, d):
        dec = irreducible_shadows(d)
        covered = [a for p in dec.all for a in p.arcs]
        assert sorted(covered) == sorted(shadow_arcs(d))


class TestGamma:
    def test_secondary_structure(self):
        assert gamma(parse_structure("((.)).")) == 0

    def test_crossing_hybrid(self):
        assert gamma(HYBRID) == 0 and is_gamma_structure(HYBRID, 0)

    def test_h_pseudoknot(self):
        assert gamma(parse_structure("..([)]..")) == 1


class TestGenusFormula:
    def test_crossing_hybrid(self):
        assert genus_by_decomposition(HYBRID) == 0 == genus(HYBRID)

    def test_square(self):
        e = product_bullet(HYBRID, HYBRID)
        assert genus_by_decomposition(e) == 1 == genus(e)

    def test_mixed_classes(self):
        # ([&)(]) already has genus one and gluing adds nothing
        first = parse_structure("([&)(])")
        assert genus(first) == 1 == genus(glue_alpha(first))
        e = product_bullet(first, HYBRID)
        dec = irreducible_shadows(e)
        assert len(dec.I2_0) == 1 and len(dec.I2_1) == 1
        assert genus_by_decomposition(e) == 2 == genus(e)

    def test_precondition(self):
        with pytest.raises(NoExteriorIrreducible):
            genus_by_decomposition(parse_structure("((&))"))

    def test_needs_two_backbones(self):
        with pytest.raises(NotTwoBackbones):
            genus_by_decomposition(one_backbone(4, [(1, 3), (2, 4)]))

    def test_holds_on_shadows(self):
        rng = random.Random(9)
        seen = 0
        while seen < 300:
            e = shadow(random_diagram(rng, 10, backbones=(2,)))
            if e.b != 2:
                continue
            try:
                got = genus_by_decomposition(e)
            except NoExteriorIrreducible:
                continue
            seen += 1
            assert got == genus(e)
