"""Tests for the built-in cylinder geometries."""

import itertools
from fractions import Fraction

import pytest

from shiftchaos.errors import CapabilityError, HorizonError, ValidationError
from shiftchaos.structures import (
    CantorStructure,
    FiniteStateStructure,
    MAdicIntervalStructure,
    load_structure,
)
from shiftchaos.symbolic import (
    SymbolicPoint,
    bounded_stream,
    enumerate_words,
    periodic_point,
)


def interval_oracle(w, base, digit):
    """Oracle: cylinder interval straight from the digit-sum definition."""
    lo = sum(Fraction(digit(s), base**k) for k, s in enumerate(w, start=1))
    return lo, lo + Fraction(1, base ** len(w))


def madic_interval(w, m):
    return interval_oracle(w, m, lambda s: s - 1)


def cantor_interval(w):
    return interval_oracle(w, 3, lambda s: 2 * (s - 1))


def set_distance(a, b):
    """Oracle: inf distance of two closed intervals from their endpoints."""
    (lo1, hi1), (lo2, hi2) = a, b
    return max(Fraction(0), lo2 - hi1, lo1 - hi2)


class TestMAdic:
    def test_diameter_closed_form(self):
        st = MAdicIntervalStructure(2)
        assert st.cylinder_diameter((1, 2)) == Fraction(1, 4)
        for w in enumerate_words(2, 5):
            assert st.cylinder_diameter(w) == Fraction(1, 32)

    @pytest.mark.parametrize("m", [2, 3])
    def test_diameter_exact_to_depth_20(self, m):
        st = MAdicIntervalStructure(m)
        for n in range(21):
            assert st.max_cylinder_diameter(n) == Fraction(1, m**n)

    def test_children_tile_parent(self):
        st = MAdicIntervalStructure(3)
        for w in enumerate_words(3, 2):
            lo, hi = st.word_interval(w)
            child_sum = sum(
                st.cylinder_diameter(w + (j,)) for j in st.alphabet.symbols()
            )
            assert child_sum == hi - lo
            # children are contiguous, left to right
            cursor = lo
            for j in st.alphabet.symbols():
                clo, chi = st.word_interval(w + (j,))
                assert clo == cursor
                cursor = chi
            assert cursor == hi

    def test_interval_matches_oracle(self):
        st = MAdicIntervalStructure(2)
        for n in range(5):
            for w in enumerate_words(2, n):
                assert st.word_interval(w) == madic_interval(w, 2)

    def test_point_distance_endpoints(self):
        # DERIVED: exact limits 0.000... = 0 and 0.111... = 1 in base 2
        st = MAdicIntervalStructure(2)
        d = st.point_distance(periodic_point((1,)), periodic_point((2,)))
        assert d == Fraction(1)

    def test_point_distance_is_pseudometric_on_presentations(self):
        # 0.0111... and 0.1000... label the same real number 1/2
        st = MAdicIntervalStructure(2)
        x = SymbolicPoint((1,), (2,))
        y = SymbolicPoint((2,), (1,))
        assert x != y
        assert st.point_distance(x, y) == 0
        assert st.is_metric is False

    def test_cylinder_distance_touching_halves(self):
        st = MAdicIntervalStructure(2)
        assert st.cylinder_distance((1,), (2,)) == 0

    def test_cylinder_distance_gap(self):
        # DERIVED: gap between [0,1/4] and [3/4,1] from exact endpoints
        st = MAdicIntervalStructure(2)
        expected = set_distance(madic_interval((1, 1), 2), madic_interval((2, 2), 2))
        assert expected == Fraction(1, 2)
        assert st.cylinder_distance((1, 1), (2, 2)) == Fraction(1, 2)

    def test_cylinder_distance_matches_oracle_exhaustively(self):
        st = MAdicIntervalStructure(2)
        for n in (1, 2, 3):
            for w1, w2 in itertools.product(enumerate_words(2, n), repeat=2):
                oracle = set_distance(madic_interval(w1, 2), madic_interval(w2, 2))
                assert st.cylinder_distance(w1, w2) == oracle

    def test_cylinder_distance_needs_equal_depth(self):
        st = MAdicIntervalStructure(2)
        with pytest.raises(ValueError):
            st.cylinder_distance((1,), (1, 2))

    def test_eval_point(self):
        st = MAdicIntervalStructure(2)
        # DERIVED: binary expansion 0.111 at depth 3
        assert st.eval_point(periodic_point((2,)), 3) == (Fraction(7, 8), Fraction(1))
        for depth in (1, 4, 9):
            assert st.eval_point(periodic_point((1,)), depth) == (
                Fraction(0),
                Fraction(1, 2**depth),
            )

    def test_eval_point_stream_horizon(self):
        st = MAdicIntervalStructure(2)
        x = bounded_stream((1, 2))
        assert st.eval_point(x, 2) == madic_interval((1, 2), 2)
        with pytest.raises(HorizonError):
            st.eval_point(x, 3)

    def test_point_distance_respects_cylinders(self):
        # exhaustive over m=2 periodic points with period <= 3, shared depth <= 6
        st = MAdicIntervalStructure(2)
        points = set()
        for length in (1, 2, 3):
            for per in enumerate_words(2, length):
                points.add(periodic_point(per))
        for x, y in itertools.product(points, repeat=2):
            for n in range(7):
                if x.prefix(n) == y.prefix(n):
                    assert st.point_distance(x, y) <= st.cylinder_diameter(x.prefix(n))

    def test_cylinder_distance_lower_bounds_point_distance(self):
        st = MAdicIntervalStructure(2)
        points = [periodic_point(per) for per in enumerate_words(2, 2)]
        for x, y in itertools.product(points, repeat=2):
            for n in (1, 2, 3):
                w1, w2 = x.prefix(n), y.prefix(n)
                assert st.point_distance(x, y) >= st.cylinder_distance(w1, w2)


class TestCantor:
    def test_diameter_closed_form(self):
        st = CantorStructure()
        assert st.cylinder_diameter((2, 1)) == Fraction(1, 9)
        for n in range(21):
            assert st.max_cylinder_diameter(n) == Fraction(1, 3**n)

    def test_removed_middle_third(self):
        st = CantorStructure()
        assert st.cylinder_distance((1,), (2,)) == Fraction(1, 3)

    def test_eval_point(self):
        # DERIVED: left then right third
        st = CantorStructure()
        assert st.eval_point(periodic_point((1, 2)), 2) == (
            Fraction(2, 9),
            Fraction(3, 9),
        )

    def test_intervals_match_oracle(self):
        st = CantorStructure()
        for n in range(5):
            for w in enumerate_words(2, n):
                assert st.word_interval(w) == cantor_interval(w)

    def test_cylinder_distance_matches_oracle(self):
        st = CantorStructure()
        for n in (1, 2, 3):
            for w1, w2 in itertools.product(enumerate_words(2, n), repeat=2):
                oracle = set_distance(cantor_interval(w1), cantor_interval(w2))
                assert st.cylinder_distance(w1, w2) == oracle

    def test_quarter_is_a_cantor_point(self):
        # 1/4 = 0.020202... in base 3
        st = CantorStructure()
        assert st.point_value(periodic_point((1, 2))) == Fraction(1, 4)
        assert st.is_metric is True


class TestFiniteState:
    def test_first_symbol_rule(self):
        st = FiniteStateStructure.unit(2)
        d = st.point_distance(periodic_point((1,)), periodic_point((2,)))
        assert d == Fraction(1)

    def test_pseudometric_on_distinct_points(self):
        # distance convention: different presentations sharing the first
        # symbol are indistinguishable
        st = FiniteStateStructure.unit(2)
        x = SymbolicPoint((1,), (2,))
        y = periodic_point((1,))
        assert x != y
        assert st.point_distance(x, y) == 0

    def test_first_symbol_rule_exhaustive(self):
        st = FiniteStateStructure([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
        pts = [periodic_point(w) for w in enumerate_words(3, 2)]
        for x, y in itertools.product(pts, repeat=2):
            expected = st.state_distance(x.symbol_at(1), y.symbol_at(1))
            assert st.point_distance(x, y) == expected

    def test_cylinder_diameters(self):
        st = FiniteStateStructure([[0, 2], [2, 0]])
        # DERIVED: sup over pairs sharing the first symbol is zero
        for n in (1, 2, 3):
            for w in enumerate_words(2, n):
                assert st.cylinder_diameter(w) == 0
        assert st.cylinder_diameter(()) == Fraction(2)
        assert st.max_cylinder_diameter(0) == Fraction(2)
        assert st.max_cylinder_diameter(5) == 0

    def test_cylinder_distance_is_table_lookup(self):
        st = FiniteStateStructure([[0, 3], [3, 0]])
        assert st.cylinder_distance((1, 1, 2), (2, 1, 1)) == Fraction(3)
        assert st.cylinder_distance((), ()) == 0

    def test_eval_point_unsupported(self):
        st = FiniteStateStructure.unit(2)
        with pytest.raises(CapabilityError):
            st.eval_point(periodic_point((1,)), 2)

    def test_empty_stream_has_no_first_symbol(self):
        st = FiniteStateStructure.unit(2)
        with pytest.raises(HorizonError):
            st.point_distance(bounded_stream(()), periodic_point((1,)))


class TestLoadStructure:
    def test_madic(self):
        st = load_structure({"type": "madic", "m": 2})
        assert isinstance(st, MAdicIntervalStructure)
        assert st.alphabet.m == 2

    def test_madic_from_json_string(self):
        st = load_structure('{"type":"madic","m":3}')
        assert st.alphabet.m == 3

    def test_cantor(self):
        assert isinstance(load_structure({"type": "cantor"}), CantorStructure)

    def test_finite_state(self):
        st = load_structure({"type": "finite_state", "distances": [[0, 1], [1, 0]]})
        assert isinstance(st, FiniteStateStructure)
        assert st.p == 2

    def test_finite_state_rational_strings_and_floats(self):
        st = load_structure(
            {"type": "finite_state", "distances": [[0, "1/3"], ["1/3", 0]]}
        )
        assert st.state_distance(1, 2) == Fraction(1, 3)
        st2 = load_structure({"type": "finite_state", "distances": [[0, 0.5], [0.5, 0]]})
        assert st2.state_distance(1, 2) == Fraction(1, 2)

    def test_all_zero_table_rejected(self):
        with pytest.raises(ValidationError) as err:
            load_structure({"type": "finite_state", "distances": [[0, 0], [0, 0]]})
        assert "distances[0][1]" in str(err.value)

    def test_asymmetric_table_rejected(self):
        with pytest.raises(ValidationError):
            load_structure({"type": "finite_state", "distances": [[0, 1], [2, 0]]})

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(ValidationError):
            load_structure({"type": "finite_state", "distances": [[1, 1], [1, 0]]})

    def test_custom_reserved(self):
        with pytest.raises(ValidationError):
            load_structure({"type": "custom"})

    def test_unknown_type(self):
        with pytest.raises(ValidationError):
            load_structure({"type": "mystery"})

    def test_invalid_json(self):
        with pytest.raises(ValidationError):
            load_structure("{not json")

    def test_bad_m(self):
        with pytest.raises(ValidationError):
            load_structure({"type": "madic", "m": 1})

    def test_config_roundtrip(self):
        for cfg in (
            {"type": "madic", "m": 3},
            {"type": "cantor"},
            {"type": "finite_state", "distances": [[0, 1], [1, 0]]},
        ):
            st = load_structure(cfg)
            assert load_structure(st.config_dict()).config_dict() == st.config_dict()
