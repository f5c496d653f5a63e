from __future__ import annotations

from fractions import Fraction as F

import pytest

from bratteli import BratteliPrefix, FormatError, SimplexPoint, TriangularSpec
from bratteli.formats import (
    emit_diagram,
    emit_targets,
    fraction_from_str,
    fraction_to_str,
    parse_diagram,
    parse_targets,
)
from bratteli.fixtures import FIXTURE_NAMES, fixtures


class TestRationals:
    def test_roundtrip(self):
        for x in (F(0), F(3), F(-2, 7), F(22, 4)):
            assert fraction_from_str(fraction_to_str(x)) == x

    def test_integers_stay_bare(self):
        assert fraction_to_str(F(5)) == "5"
        assert fraction_to_str(F(5, 2)) == "5/2"

    def test_bad_input(self):
        with pytest.raises(FormatError):
            fraction_from_str("1/0")
        with pytest.raises(FormatError):
            fraction_from_str("a/b")


class TestDiagramFiles:
    def test_triangular_roundtrip(self):
        spec = TriangularSpec(2, [(1,), (3, 0), (1, 2, 1)])
        assert parse_diagram(emit_diagram(spec)) == spec

    def test_general_roundtrip(self, ex57b):
        text = emit_diagram(ex57b)
        again = parse_diagram(text)
        assert again == ex57b
        assert emit_diagram(again) == text

    def test_general_derives_sizes_from_first_level(self):
        text = '{"format":"general","matrices":[[[1],[2]]],"u1":[1],"unital":true}'
        prefix = parse_diagram(text)
        assert [l.entries for l in prefix.levels] == [(1,), (1, 2)]

    def test_unknown_keys_rejected(self):
        with pytest.raises(FormatError):
            parse_diagram('{"format":"triangular","k0":1,"mvectors":[[1]],"extra":0}')
        with pytest.raises(FormatError):
            parse_diagram('{"format":"general","u1":[1],"matrices":[]}')

    def test_unknown_format_rejected(self):
        with pytest.raises(FormatError):
            parse_diagram('{"format":"circular"}')

    def test_non_integer_entries_rejected(self):
        with pytest.raises(FormatError):
            parse_diagram('{"format":"triangular","k0":1,"mvectors":[[1.5]]}')
        with pytest.raises(FormatError):
            parse_diagram('{"format":"triangular","k0":true,"mvectors":[[1]]}')


class TestTargetsFiles:
    def test_roundtrip(self):
        points = [
            SimplexPoint([F(1)]),
            SimplexPoint([F(2, 3), F(1, 3)]),
            SimplexPoint([F(1, 2), F(1, 4), F(1, 4)]),
        ]
        assert parse_targets(emit_targets(points)) == points

    def test_dimension_check(self):
        with pytest.raises(FormatError):
            parse_targets('{"format":"targets","points":[["1/2","1/2"]]}')

    def test_sum_check(self):
        with pytest.raises(FormatError):
            parse_targets('{"format":"targets","points":[["1/2"]]}')


class TestFixtures:
    def test_all_fixtures_parse_validate_and_reemit(self):
        for name in FIXTURE_NAMES:
            text = fixtures(name)
            diagram = parse_diagram(text)
            assert emit_diagram(diagram) == text
            if isinstance(diagram, BratteliPrefix):
                assert diagram.validate().ok

    def test_fixture_emission_is_deterministic(self):
        for name in FIXTURE_NAMES:
            assert fixtures(name) == fixtures(name)

    def test_ex43_is_the_all_ones_family(self):
        spec = parse_diagram(fixtures("ex43"))
        assert isinstance(spec, TriangularSpec)
        assert spec.k0 == 1
        assert all(m == (1,) * (n + 1) for n, m in enumerate(spec.mvectors))

    def test_ex57b_matrix_shape(self, ex57b):
        for n, mat in enumerate(ex57b.matrices):
            assert mat.rows == n + 2 and mat.cols == n + 1
            assert mat.row(n + 1) == (0,) * n + (2,)
