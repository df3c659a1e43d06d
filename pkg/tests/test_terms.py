import itertools

import pytest
from hypothesis import given, strategies as st

from termsep.terms import (
    InvalidPathError,
    Mul,
    ParseError,
    Term,
    Var,
    catalan,
    enumerate_ordered_terms,
    is_proper_prefix,
    leftmost_disagreement,
    occurrences,
    parse_term,
    render_term,
    shape_of,
    subterm_at,
    term_from_json,
    term_to_json,
)

SENTINEL = "χ"


def terms_strategy(max_leaves=8):
    names = st.sampled_from(["x", "y", "z", "x1", "x2", "w_3"])
    return st.recursive(
        names.map(Var), lambda sub: st.tuples(sub, sub).map(lambda p: Mul(*p)),
        max_leaves=max_leaves,
    )


class TestParsing:
    def test_single_variable(self):
        assert parse_term("x") == Var("x")

    def test_nested(self):
        assert parse_term("(x1*(x2*x3))") == Mul(Var("x1"), Mul(Var("x2"), Var("x3")))

    def test_pair_of_pairs(self):
        t = parse_term("((x*y)*(z*y))")
        assert t == Mul(Mul(Var("x"), Var("y")), Mul(Var("z"), Var("y")))
        assert parse_term(render_term(t)) == t

    def test_outer_parens_optional(self):
        assert parse_term("x*y") == parse_term("(x*y)")

    def test_whitespace_ignored(self):
        assert parse_term(" ( x * y ) ") == Mul(Var("x"), Var("y"))

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as err:
            parse_term("(x*")
        assert err.value.position == 3

    def test_chi_alias(self):
        assert parse_term("chi") == Var(SENTINEL)

    @given(terms_strategy())
    def test_round_trip(self, t):
        assert parse_term(render_term(t)) == t

    @given(terms_strategy())
    def test_json_round_trip(self, t):
        assert term_from_json(term_to_json(t)) == t


class TestOccurrences:
    def test_leaf(self):
        assert occurrences(Var("x")) == [("", "x")]

    def test_five_variable_example(self):
        s = parse_term("(x1*(x2*x3))*(x4*x5)")
        assert [p for p, _ in occurrences(s)] == ["ll", "lrl", "lrr", "rl", "rr"]

    def test_pair(self):
        assert occurrences(parse_term("x*y")) == [("l", "x"), ("r", "y")]

    @given(terms_strategy())
    def test_leftmost_path_is_all_l(self, t):
        first_path, _ = occurrences(t)[0]
        assert set(first_path) <= {"l"}

    @given(terms_strategy())
    def test_every_path_addresses_its_leaf(self, t):
        for path, name in occurrences(t):
            assert subterm_at(t, path) == Var(name)


class TestSubterm:
    def test_worked_example(self):
        s = parse_term("(x1*(x2*x3))*(x4*x5)")
        assert render_term(subterm_at(s, "lr")) == "x2*x3"

    def test_root(self):
        t = parse_term("(x*y)*z")
        assert subterm_at(t, "") is t

    def test_invalid_path(self):
        with pytest.raises(InvalidPathError):
            subterm_at(parse_term("x*y"), "rl")


class TestShape:
    def test_structure_only(self):
        assert shape_of(parse_term("x*y")) == shape_of(parse_term("x*x"))
        assert shape_of(parse_term("(x*y)*z")) == shape_of(parse_term("(y*y)*x"))

    def test_idempotent(self):
        t = parse_term("(x*y)*z")
        assert shape_of(shape_of(t)) == shape_of(t)


class TestCatalan:
    def test_small_values(self):
        assert [catalan(m) for m in range(6)] == [1, 1, 2, 5, 14, 42]

    @pytest.mark.parametrize("k", range(1, 9))
    def test_matches_enumeration(self, k):
        assert len(enumerate_ordered_terms(k)) == catalan(k - 1)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            catalan(-1)


class TestOrderedTerms:
    def test_single(self):
        assert enumerate_ordered_terms(1) == [Var("x1")]

    def test_four_matches_customary_listing(self):
        expected = [
            "((x1*x2)*x3)*x4",
            "(x1*(x2*x3))*x4",
            "(x1*x2)*(x3*x4)",
            "x1*((x2*x3)*x4)",
            "x1*(x2*(x3*x4))",
        ]
        assert [render_term(t) for t in enumerate_ordered_terms(4)] == expected

    def test_five_all_distinct(self):
        terms = enumerate_ordered_terms(5)
        assert len(terms) == 14
        assert len(set(terms)) == 14

    @pytest.mark.parametrize("k", range(1, 11))
    def test_counts_and_distinctness(self, k):
        terms = enumerate_ordered_terms(k)
        assert len(set(terms)) == len(terms) == catalan(k - 1)

    @pytest.mark.parametrize("k", range(2, 8))
    def test_variables_in_order(self, k):
        for t in enumerate_ordered_terms(k):
            names = [name for _, name in occurrences(t)]
            assert names == [f"x{i}" for i in range(1, k + 1)]

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            enumerate_ordered_terms(0)


class TestLeftmostDisagreement:
    def test_t1_t2(self):
        t1, t2, t3, _, t5 = enumerate_ordered_terms(4)
        assert leftmost_disagreement(t1, t2) == (1, "lll", "ll")
        assert leftmost_disagreement(t3, t5) == (1, "ll", "l")

    def test_associativity_pair(self):
        s, t = enumerate_ordered_terms(3)
        assert leftmost_disagreement(s, t) == (1, "ll", "l")

    def test_equal_rejected(self):
        t = enumerate_ordered_terms(3)[0]
        with pytest.raises(ValueError):
            leftmost_disagreement(t, t)

    def test_non_ordered_rejected(self):
        with pytest.raises(ValueError):
            leftmost_disagreement(parse_term("x*y"), parse_term("y*x"))

    @pytest.mark.parametrize("k", range(3, 7))
    def test_proper_prefix_property_exhaustive(self, k):
        for s, t in itertools.combinations(enumerate_ordered_terms(k), 2):
            m, ps, pt = leftmost_disagreement(s, t)
            assert is_proper_prefix(ps, pt) or is_proper_prefix(pt, ps)
            # agreement before m, straight from the occurrence lists
            for i in range(m - 1):
                assert occurrences(s)[i][0] == occurrences(t)[i][0]
