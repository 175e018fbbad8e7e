import pytest
from hypothesis import given, strategies as st

from src.errors import EquationError, InvalidStructureError, PositionError, TermSyntaxError
from src.term import (
    ARRANGEMENT,
    F,
    F_PRIME,
    F_SECOND,
    TermAutomaton,
    dot,
    from_equations,
    letter,
    omega,
    pos_meet,
    term_leq,
    truncate,
)

A_OMEGA = "s = a . s"


def test_regular_term_from_one_equation():
    a = from_equations(A_OMEGA, ARRANGEMENT)
    assert not a.is_finite()
    assert a.symbol_at("") == "dot"
    assert a.symbol_at("21") == "a"
    assert a.symbol_at("222") == "dot"


def test_positions_leave_the_term():
    a = from_equations(A_OMEGA, ARRANGEMENT)
    assert not a.is_position("3")
    with pytest.raises(PositionError):
        a.state_at("13")


def test_truncation():
    a = from_equations(A_OMEGA, ARRANGEMENT)
    assert str(truncate(a, 2)) == "(a . (Omega . Omega))"
    assert str(truncate(a, 0)) == "Omega"


@given(st.integers(0, 6))
def test_truncations_approximate_the_term(d):
    a = from_equations(A_OMEGA, ARRANGEMENT)
    assert term_leq(truncate(a, d), a, ARRANGEMENT)
    assert term_leq(truncate(a, d), truncate(a, d + 1), ARRANGEMENT)


def test_a_different_symbol_is_not_below():
    a = from_equations(A_OMEGA, ARRANGEMENT)
    assert not term_leq(dot(letter("b"), omega()), a, ARRANGEMENT)


def test_named_ext_occurrences():
    a = from_equations("t = ext[r](s . s)\ns = ext[a](Omega)", F)
    assert a.is_finite()
    assert a.name_at("") == "r"
    assert a.name_at("11") == "a"
    assert str(a.to_finite_term()) == "ext[r]((ext[a](Omega) . ext[a](Omega)))"


def test_omega_takes_the_expected_sort():
    a = from_equations("t = ext(Omega)", F_PRIME)
    assert a.symbol_at("1") == "Omega_f"


def test_comments_and_blank_lines_are_ignored():
    text = "# a loop\n\ns = a . s   # trailing\n"
    assert from_equations(text, ARRANGEMENT) == from_equations(A_OMEGA, ARRANGEMENT)


def test_root_defaults_to_the_first_unknown():
    a = from_equations("s = a . y\ny = b . y", ARRANGEMENT)
    assert a.root == "s"
    assert from_equations("s = a . y\ny = b . y", ARRANGEMENT, root="y").root == "y"


def test_generic_signature_is_inferred():
    a = from_equations("s = f(s, b)")
    assert a.signature.declares("f")
    assert a.signature.is_letter("b")
    assert not a.is_finite()


@pytest.mark.parametrize(
    "text",
    ["s = y\ny = a . s", "s = a . s\ns = b . s", "", "t = ext(y)"],
    ids=["unguarded", "defined-twice", "empty", "undefined"],
)
def test_equation_errors(text):
    signature = F if text.startswith("t") else ARRANGEMENT
    with pytest.raises(EquationError):
        from_equations(text, signature)


@pytest.mark.parametrize("text", ["s = (a . b", "s a", "s = a . $", "s = a b"])
def test_syntax_errors(text):
    with pytest.raises(TermSyntaxError):
        from_equations(text, ARRANGEMENT)


def test_validate_reports_arity_and_sort():
    bad_arity = TermAutomaton([0, 1], 0, {0: ("dot", (1,)), 1: ("Omega", ())}, F)
    assert bad_arity.validate() == ["state 0: dot expects 2 sons, got 1"]
    bad_sort = from_equations("t = ext(t . t)", F_PRIME)
    assert any("sort" in e for e in bad_sort.validate())


def test_well_formed_term_validates():
    assert from_equations(A_OMEGA, ARRANGEMENT).validate() == []


def test_canonicalize_merges_equal_subterms():
    two = from_equations("s = a . y\ny = a . s", ARRANGEMENT).canonicalize()
    one = from_equations(A_OMEGA, ARRANGEMENT).canonicalize()
    assert len(two.states) == 2
    assert two == one


def test_canonicalize_keeps_names_apart():
    a = from_equations("t = ext[r](s . u)\ns = ext[a](Omega)\nu = ext[b](Omega)", F).canonicalize()
    assert len(a.states) == 5
    assert {a.names[q] for q in a.names} == {"r", "a", "b"}


def test_finite_term_round_trip():
    t = dot(letter("a"), omega())
    assert TermAutomaton.from_finite_term(t, ARRANGEMENT).to_finite_term() == t


def test_infinite_term_has_no_finite_form():
    with pytest.raises(InvalidStructureError):
        from_equations(A_OMEGA, ARRANGEMENT).to_finite_term()


def test_rerooted_subterm():
    a = from_equations("s = a . y\ny = b . y", ARRANGEMENT)
    sub = a.rerooted("y")
    assert sub.root == "y"
    assert "s" not in sub.states
    assert sub.symbol_at("1") == "b"


def test_pos_meet():
    assert pos_meet("121", "13") == ("1", "2", "3")
    assert pos_meet("12", "12") == ("12", None, None)


@pytest.mark.parametrize(
    "text",
    ["x = a . x", "t = ext2[x](Omega, Omega)", "t = mkh(ext2[a](Omega, x))"],
    ids=["unknown", "node-name", "letter"],
)
def test_the_product_word_is_not_a_name(text):
    with pytest.raises(TermSyntaxError, match="hedge product"):
        from_equations(text, F_SECOND)


def test_star_is_the_product_too():
    pair = "t = ext2[u](mkh(ext2[a](Omega, Omega)) {} mkh(ext2[b](Omega, Omega)), Omega)"
    spelled = from_equations(pair.format("x"), F_SECOND)
    starred = from_equations(pair.format("*"), F_SECOND)
    assert spelled == starred
    assert spelled.symbol_at("1") == "otimes"


def test_names_that_merely_start_with_x_are_fine():
    a = from_equations("xs = a . xs", ARRANGEMENT)
    assert a.root == "xs"
    assert a.symbol_at("1") == "a"
