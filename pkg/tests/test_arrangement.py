import itertools

import pytest
from hypothesis import given, strategies as st

from src.arrangement import (
    EMPTY,
    Concat,
    Empty,
    FiniteArrangement,
    LabelledSet,
    LazyArrangement,
    Letter,
    OmegaPower,
    Ordering,
    RegularArrangementExpr,
    Verdict,
    concat,
    expression_of,
    iso,
    parse_expression,
    relabel,
    to_labelled_set,
    window,
    word_expr,
)
from src.errors import AlphabetMismatchError, FormatError, UnknownNodeError

words = st.lists(st.sampled_from("abc"), max_size=8)


def _int_compare(u, v) -> Ordering:
    return Ordering.EQ if u == v else (Ordering.LT if u < v else Ordering.GT)


def _oracle_only(letter="a") -> LazyArrangement:
    return LazyArrangement(lambda: itertools.count(), _int_compare, lambda u: letter)


# finite arrangements


def test_finite_compare():
    w = FiniteArrangement.from_word("abc")
    assert w.compare(0, 2) is Ordering.LT
    assert w.compare(2, 1) is Ordering.GT
    assert w.compare(1, 1) is Ordering.EQ
    assert w.label_at(1) == "b"


def test_finite_compare_unknown_position():
    with pytest.raises(UnknownNodeError):
        FiniteArrangement.from_word("ab").compare(0, 7)


def test_concat_tags_overlapping_positions():
    w = FiniteArrangement.from_word("ab") @ FiniteArrangement.from_word("c")
    assert w.word == ("a", "b", "c")
    assert w.ordered_positions == ((0, 0), (0, 1), (1, 0))


def test_concat_keeps_disjoint_positions():
    left = FiniteArrangement(["p", "q"], {"p": "a", "q": "b"})
    right = FiniteArrangement(["r"], {"r": "a"})
    assert left.concat(right).ordered_positions == ("p", "q", "r")


@given(words, words)
def test_concat_of_words(u, v):
    w = concat(FiniteArrangement.from_word(u), FiniteArrangement.from_word(v))
    assert tuple(w.word) == tuple(u) + tuple(v)


def test_empty_is_neutral_for_concat():
    w = FiniteArrangement.from_word("ab")
    assert concat(EMPTY, w) is w
    assert concat(w, EMPTY) is w


def test_relabel_a_word():
    assert relabel(str.upper, FiniteArrangement.from_word("ab")).word == ("A", "B")


@given(words)
def test_labelled_set_of_a_word(u):
    counts = to_labelled_set(FiniteArrangement.from_word(u))
    assert counts.total() == len(u)
    assert all(counts[a] == u.count(a) for a in "abc")


# labelled sets


def test_labelled_set_text():
    s = LabelledSet.parse("b:w a:2")
    assert str(s) == "a:2 b:w"
    assert not s.is_finite()
    assert s.letters() == ("a", "b")


def test_labelled_set_drops_zero_counts():
    assert LabelledSet({"a": 0}) == LabelledSet()
    assert LabelledSet({"a": 1}) + LabelledSet({"a": 2}) == LabelledSet({"a": 3})


def test_labelled_set_elements_truncate_omega():
    s = LabelledSet.parse("a:3 b:w")
    assert s.elements(2) == (("a", 0), ("a", 1), ("b", 0), ("b", 1))


@pytest.mark.parametrize("text", ["a", "a:", "a:-1", "a:x"])
def test_labelled_set_rejects_bad_items(text):
    with pytest.raises(FormatError):
        LabelledSet.parse(text)


# expressions


@pytest.mark.parametrize("text", ["a . b^w", "(a . b)^w", "sh{a, b}", "a^-w . b", "empty"])
def test_expression_text_round_trip(text):
    e = parse_expression(text)
    assert parse_expression(str(e)) == e


@pytest.mark.parametrize("text", ["", "a . ", "a )", "a $", "sh{a, b"])
def test_expression_syntax_errors(text):
    with pytest.raises(FormatError):
        parse_expression(text)


def test_normal_form_rotates_a_prefix_into_the_period():
    assert parse_expression("a . (b . a)^w").normal_form() == parse_expression("(a . b)^w").normal_form()


def test_normal_form_takes_the_primitive_period():
    assert parse_expression("(a . a)^w").normal_form() == OmegaPower(Letter("a"))


def test_normal_form_drops_omega():
    assert parse_expression("a . empty . b").normal_form() == word_expr("ab")
    assert parse_expression("empty^w").normal_form() == Empty()


def test_shuffle_is_idempotent_and_unordered():
    assert parse_expression("sh{a, b} . sh{a, b}").normal_form() == parse_expression("sh{b, a}").normal_form()


def test_shuffle_absorbs_its_parts():
    assert parse_expression("sh{a, b} . a . sh{a, b}").normal_form() == parse_expression("sh{a, b}").normal_form()


@pytest.mark.parametrize(
    "text, kind",
    [("a . b", "finite"), ("a . b^w", "omega"), ("b^-w . a", "omega-rev"), ("sh{a, b}", "eta"), ("a^w . b", None)],
)
def test_expression_kinds(text, kind):
    assert parse_expression(text).kind() == kind


def test_expression_counts():
    assert str(parse_expression("a . b^w").labelled_set()) == "a:1 b:w"


def test_expression_frontier():
    e = parse_expression("a . b^w")
    assert window(e, k=3).word == ("a", "b", "b")
    assert to_labelled_set(e.lazy) == LabelledSet.parse("a:1 b:w")
    assert e.lazy.is_finite() is False


def test_expression_recovered_from_its_frontier():
    e = parse_expression("a . b^w")
    assert expression_of(e.lazy) == Concat(Letter("a"), OmegaPower(Letter("b")))


def test_concat_of_a_word_and_an_expression():
    w = concat(FiniteArrangement.from_word("ab"), parse_expression("c^w"))
    assert w.normal_form().kind() == "omega"


# isomorphism


def test_iso_by_normal_form():
    assert iso(parse_expression("a . (b . a)^w"), parse_expression("(a . b)^w")).verdict is Verdict.ISO


def test_words_differ_with_a_certificate():
    result = iso(FiniteArrangement.from_word("ab"), FiniteArrangement.from_word("ba"))
    assert result.verdict is Verdict.NOT_ISO
    assert "position 0" in result.certificate
    assert not result


def test_omega_and_reverse_omega_differ():
    assert iso(parse_expression("a^w"), parse_expression("a^-w")).verdict is Verdict.NOT_ISO


def test_eta_shuffle_differs_from_omega():
    assert iso(parse_expression("sh{a}"), parse_expression("a^w")).verdict is Verdict.NOT_ISO


def test_alphabets_must_agree():
    with pytest.raises(AlphabetMismatchError):
        iso(FiniteArrangement.from_word("a"), FiniteArrangement.from_word("b"))


def test_oracle_only_arrangements_are_unknown():
    result = iso(_oracle_only(), _oracle_only(), bound=10)
    assert result.verdict is Verdict.UNKNOWN
    assert str(result) == "unknown(10)"


@given(words, words)
def test_iso_of_words_is_equality(u, v):
    a, b = FiniteArrangement.from_word(u), FiniteArrangement.from_word(v)
    if a.alphabet != b.alphabet:
        return
    assert (iso(a, b).verdict is Verdict.ISO) == (tuple(u) == tuple(v))


def test_window_of_an_oracle_arrangement():
    w = window(_oracle_only("x"), k=4)
    assert w.ordered_positions == (0, 1, 2, 3)
    assert w.word == ("x",) * 4


def test_expression_constructors_must_define_the_structure_queries():
    class Partial(RegularArrangementExpr):
        def letters(self):
            return frozenset()

        def is_finite(self):
            return True

    with pytest.raises(TypeError, match="abstract"):
        Partial()
    assert str(Concat(Letter("a"), Letter("b"))) == "a . b"
