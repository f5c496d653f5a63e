from __future__ import annotations

from fractions import Fraction as F

import pytest

from bratteli import (
    BratteliError,
    BratteliPrefix,
    MultiplicityMatrix,
    SimplexPoint,
    TraceLabel,
    TriangularSpec,
    check_rfd_ji,
    embed_triangular,
    induced_trace_map,
    label_trace,
    limit_trace_restriction,
    push_point,
    zeta,
)
from bratteli.diagram import characteristic_sequence


class TestInducedTraceMap:
    def test_single_source_vertex_forces_unit_columns(self):
        m = induced_trace_map(MultiplicityMatrix([[1], [2]]), [2], [2, 4])
        assert m.column_point(0).coords == (F(1),)
        assert m.column_point(1).coords == (F(1),)

    def test_all_ones_step_two(self, ones12):
        prefix = embed_triangular(ones12, 3)
        m = induced_trace_map(prefix.matrices[2], prefix.levels[2], prefix.levels[3])
        assert m.column_point(0) == SimplexPoint.vertex(3, 0)
        assert m.column_point(1) == SimplexPoint.vertex(3, 1)
        assert m.column_point(2) == SimplexPoint.vertex(3, 2)
        assert m.column_point(3).coords == (F(1, 4), F(1, 4), F(1, 2))

    def test_identity_step(self):
        m = induced_trace_map(MultiplicityMatrix.identity(3), [1, 2, 3], [1, 2, 3])
        assert m.entries == tuple(
            tuple(F(int(i == j)) for j in range(3)) for i in range(3)
        )

    def test_non_unital_rejected(self):
        with pytest.raises(BratteliError):
            induced_trace_map(MultiplicityMatrix([[1]]), [1], [2])


class TestZeta:
    def test_all_ones_level_four(self, ones12):
        assert zeta(ones12, 4).coords == (F(1, 16), F(1, 16), F(2, 16), F(4, 16), F(8, 16))

    def test_level_zero_is_the_point(self, ones12):
        assert zeta(ones12, 0).coords == (F(1),)

    def test_hand_formula(self):
        spec = TriangularSpec(1, [(1,), (2, 1)])
        assert zeta(spec, 1).coords == (F(2, 3), F(1, 3))

    def test_sums_to_one_exactly(self):
        spec = TriangularSpec(3, [(2,), (5, 1), (1, 0, 7), (2, 3, 1, 1)])
        for n in range(4):
            assert sum(zeta(spec, n).coords) == 1


class TestPushPoint:
    def test_persistent_vertices_fixed(self, ones12):
        prefix = embed_triangular(ones12, 4)
        assert push_point(prefix, SimplexPoint.vertex(4, 2), 3, 2) == SimplexPoint.vertex(3, 2)

    def test_new_vertex_lands_on_zeta(self, ones12):
        prefix = embed_triangular(ones12, 4)
        assert push_point(prefix, SimplexPoint.vertex(4, 3), 3, 2) == zeta(ones12, 2)

    def test_barycenter_through_identity_steps(self):
        prefix = BratteliPrefix([[2, 3]] * 3, [MultiplicityMatrix.identity(2)] * 2)
        b = SimplexPoint.barycenter(2)
        assert push_point(prefix, b, 2, 0) == b

    def test_dimension_mismatch(self, ones12):
        prefix = embed_triangular(ones12, 3)
        with pytest.raises(BratteliError):
            push_point(prefix, SimplexPoint.vertex(2, 0), 3, 1)

    def test_functorial_over_intermediate_level(self, ones12):
        prefix = embed_triangular(ones12, 6)
        point = zeta(ones12, 5)
        direct = push_point(prefix, point, 5, 1)
        staged = push_point(prefix, push_point(prefix, point, 5, 3), 3, 1)
        assert direct == staged


class TestLimitTraceRestriction:
    def test_all_ones_level_three(self, ones12):
        ks = characteristic_sequence(ones12, 3)
        assert limit_trace_restriction(ks, 3).coords == (F(1, 8), F(1, 8), F(2, 8), F(4, 8))

    def test_single_atom(self):
        assert limit_trace_restriction([1, 0, 0, 0, 0, 0], 5) == SimplexPoint.vertex(6, 0)

    def test_halving_weights(self):
        assert limit_trace_restriction([F(1, 2), F(1, 4)], 1).coords == (F(2, 3), F(1, 3))

    def test_all_zero_rejected(self):
        with pytest.raises(BratteliError):
            limit_trace_restriction([0, 0, 0], 2)


class TestLabelTrace:
    def test_line_index(self, ones12):
        prefix = embed_triangular(ones12, 6)
        witness = check_rfd_ji(prefix).witness
        assert label_trace(prefix, witness, 3) == TraceLabel("type-I", 4)

    def test_coherent_limit_family_is_candidate(self, ones12):
        prefix = embed_triangular(ones12, 6)
        witness = check_rfd_ji(prefix).witness
        family = [
            limit_trace_restriction(characteristic_sequence(ones12, n), n)
            for n in range(7)
        ]
        assert label_trace(prefix, witness, family) == TraceLabel("type-II1-candidate")

    def test_family_pinned_to_vertex(self, ones12):
        prefix = embed_triangular(ones12, 5)
        witness = check_rfd_ji(prefix).witness
        family = [push_point(prefix, SimplexPoint.vertex(6, 2), 5, n) for n in range(5)]
        family.append(SimplexPoint.vertex(6, 2))
        assert label_trace(prefix, witness, family) == TraceLabel("type-I", 2)

    def test_incoherent_family_rejected(self, ones12):
        prefix = embed_triangular(ones12, 3)
        witness = check_rfd_ji(prefix).witness
        family = [SimplexPoint.vertex(1, 0), SimplexPoint.vertex(2, 1), SimplexPoint.vertex(3, 2)]
        with pytest.raises(BratteliError):
            label_trace(prefix, witness, family)

    def test_never_both_labels(self, ones12):
        # a family pinned to a vertex stays type I under every truncation
        prefix = embed_triangular(ones12, 6)
        witness = check_rfd_ji(prefix).witness
        family = [push_point(prefix, SimplexPoint.vertex(7, 1), 6, n) for n in range(6)]
        family.append(SimplexPoint.vertex(7, 1))
        kinds = set()
        for cut in range(1, len(family) + 1):
            kinds.add(label_trace(prefix, witness, family[:cut]).kind)
        assert kinds == {"type-I"}
