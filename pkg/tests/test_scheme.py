import pytest
from hypothesis import given, settings

from conftest import SBJ_EXAMPLE, SBJ_LOOP, binary_join_trees, join_trees
from src.arrangement import FiniteArrangement, OmegaPower, Verdict, parse_expression
from src.errors import QuotientError
from src.scheme import Run, SBJScheme, SchemeService, SJScheme, SOJScheme, iso_schemes, minimize
from src.term import F, F_PRIME, F_SECOND, from_equations
from src.trees import oj_global_from_local, structure, structure_forest, structure_ordered, val, val_sj, val_soj

FAN = "t = ext[r](mkf(ext[a](Omega)) U+ mkf(ext[b](Omega)) U+ mkf(ext[c](Omega)))"
ORDERED_CONCAT = "t = ext2[p](Omega, Omega) . ext2[q](mkh(ext2[l](Omega, Omega)), mkh(ext2[r](Omega, Omega)))"

# isomorphism types of the subtrees below each node of the example
CLASSES = {x: "leaf" for x in "fahikmb"}
CLASSES.update({"g": "one", "j": "one", "c": "one", "e": "two", "d": "two"})


@pytest.fixture
def example():
    return val(from_equations(SBJ_EXAMPLE, F))


@pytest.fixture
def loop_scheme():
    return SBJScheme.of_term(from_equations(SBJ_LOOP, F))[0]


# SBJ schemes


def test_standard_scheme_describes_its_tree(example):
    scheme, run = SBJScheme.standard(example)
    report = scheme.describes(example, run)
    assert report.ok
    assert report.up_to_bound is None
    assert str(report) == "ok"


def test_wrong_run_is_a_violation(example):
    scheme, _ = SBJScheme.standard(example)
    report = scheme.describes(example, Run({x: "a" for x in example.nodes}))
    assert not report
    assert report.clause == "axis"


def test_unknown_state_is_a_violation(example):
    scheme, _ = SBJScheme.standard(example)
    report = scheme.describes(example, Run({x: "z" for x in example.nodes}))
    assert report.clause in ("axis", "state")
    assert not report.ok


def test_unfolding_of_the_standard_scheme(example):
    scheme, _ = SBJScheme.standard(example)
    u = scheme.unfold(depth_bound=4, width_bound=8)
    assert u.complete
    assert len(u.tree) == len(example)
    assert u.tree.is_isomorphic(example)
    assert u.describes().up_to_bound is None


def test_scheme_read_off_a_term(example):
    scheme, run = SBJScheme.of_term(from_equations(SBJ_EXAMPLE, F))
    assert scheme.describes(example, run)


def test_minimal_scheme_has_one_state_per_subtree_type(example):
    scheme, _ = SBJScheme.standard(example)
    m = minimize(scheme)
    assert len(m.states) == len(set(CLASSES.values()))
    assert [str(q) for q in m.axis.word()] == ["q0", "q1", "q1", "q2", "q0"]


def test_minimize_is_idempotent(example):
    m = minimize(SBJScheme.standard(example)[0])
    assert minimize(m).key() == m.key()


def test_quotient_by_subtree_type(example):
    scheme, _ = SBJScheme.standard(example)
    merged = scheme.quotient(CLASSES)
    assert set(merged.states) == {"leaf", "one", "two"}
    assert merged.describes(example, Run(CLASSES))


def test_quotient_rejects_different_data(example):
    scheme, _ = SBJScheme.standard(example)
    s = {x: x for x in example.nodes}
    s["g"] = "e"
    with pytest.raises(QuotientError):
        scheme.quotient(s)


def test_loop_scheme(loop_scheme):
    m = minimize(loop_scheme)
    assert len(m.states) == 2
    assert isinstance(m.axis, OmegaPower)


def test_split_states_give_an_isomorphic_scheme(loop_scheme):
    split, _ = SBJScheme.of_term(from_equations("t1 = ext(ext(Omega)) . t2\nt2 = ext(ext(Omega)) . t1", F))
    assert len(minimize(split).states) == 2
    assert minimize(split).key() == minimize(loop_scheme).key()
    assert iso_schemes(split, loop_scheme).verdict is Verdict.ISO


def test_different_loops_are_not_isomorphic(loop_scheme):
    other, _ = SBJScheme.of_term(from_equations("t1 = ext(Omega) . t1", F))
    assert iso_schemes(other, loop_scheme).verdict is Verdict.NOT_ISO


def test_loop_scheme_describes_the_lazy_value():
    a = from_equations(SBJ_LOOP, F)
    scheme, run = SBJScheme.of_term(a)
    report = scheme.describes(val(a), run, bound=10)
    assert report.ok
    assert report.up_to_bound == 10


def test_bounded_unfolding_of_an_infinite_axis(loop_scheme):
    u = minimize(loop_scheme).unfold(depth_bound=2, width_bound=4)
    assert not u.complete
    assert len(u.tree) == 8
    axis = u.tree.axis
    below = u.tree.topped_lines(axis[0])[0][0]
    assert u.is_node(below) and not u.is_node(("zz",))
    assert u.leq(below, axis[1])
    report = u.describes()
    assert report.ok and report.up_to_bound == 2


def test_alternating_axis():
    scheme = SBJScheme(
        "abc",
        parse_expression("(a . b)^w"),
        {"a": parse_expression("c"), "b": parse_expression("c . c"), "c": parse_expression("empty")},
    )
    u = scheme.unfold(depth_bound=2, width_bound=6)
    assert [u.run.state(x) for x in u.tree.axis] == ["a", "b"] * 3
    assert len(u.tree) == 15
    assert u.describes().ok
    assert len(minimize(scheme).states) == 3


# SJ and SOJ schemes


def test_sj_scheme_of_a_fan():
    a = from_equations(FAN, F_PRIME)
    scheme, run = SJScheme.of_term(a)
    assert scheme.describes(val_sj(a), run)
    m = minimize(scheme)
    assert len(m.states) == 2
    assert len(m.directions) == 1


def test_sj_standard_scheme_unfolds_to_its_tree():
    j = val_sj(from_equations(FAN, F_PRIME))
    scheme, run = SJScheme.standard(j)
    assert scheme.describes(j, run)
    u = scheme.unfold(depth_bound=3, width_bound=6)
    assert u.complete
    assert u.tree.is_isomorphic(j)


def test_soj_standard_scheme_unfolds_to_its_tree():
    j = val_soj(from_equations(ORDERED_CONCAT, F_SECOND))
    scheme, run = SOJScheme.standard(j)
    assert scheme.describes(j, run)
    u = scheme.unfold(depth_bound=3, width_bound=6)
    assert u.complete
    assert u.tree.is_valid()
    assert u.tree.is_isomorphic(j)
    assert [x[-1] for x in u.tree.order] == ["l", "p", "r", "q"]


def test_soj_scheme_read_off_a_term():
    a = from_equations(ORDERED_CONCAT, F_SECOND)
    scheme, run = SOJScheme.of_term(a)
    assert scheme.describes(val_soj(a), run)


def test_scheme_kinds_differ():
    j = val_sj(from_equations(FAN, F_PRIME))
    loop = SBJScheme.of_term(from_equations(SBJ_LOOP, F))[0]
    assert iso_schemes(SJScheme.standard(j)[0], loop).verdict is Verdict.NOT_ISO


# service


def test_service_follows_the_tree_kind(example):
    service = SchemeService("sbj")
    j = val_sj(from_equations(FAN, F_PRIME))
    scheme, run = service.standard(j)
    assert service.kind == "sj"
    assert isinstance(scheme, SJScheme)
    assert service.describes(scheme, j, run)


def test_service_falls_back_on_unknown_kind():
    service = SchemeService("bogus")
    assert service.kind == "sbj"
    service.set_kind("nope")
    assert service.kind == "sbj"


# random trees


def _complete_unfolding(scheme, n):
    u = scheme.unfold(depth_bound=n + 1, width_bound=n + 1)
    assert u.complete
    return u.tree


def _copies(scheme: SBJScheme, copies: int, name) -> SBJScheme:
    """each state x becomes copies states name(x, i); the children of copy i use copy i + 1."""
    words = {
        name(x, i): FiniteArrangement.from_word([name(y, (i + 1) % copies) for y in scheme.words[x].word])
        for x in scheme.states
        for i in range(copies)
    }
    axis = FiniteArrangement.from_word([name(y, k % copies) for k, y in enumerate(scheme.axis.word)])
    return SBJScheme(list(words), axis, words)


@settings(max_examples=100)
@given(binary_join_trees(max_nodes=10))
def test_standard_sbj_scheme_of_any_tree(p):
    j = structure(p)
    scheme, run = SBJScheme.standard(j)
    assert scheme.describes(j, run).ok
    assert _complete_unfolding(scheme, len(j)).is_isomorphic(j)


@settings(max_examples=100)
@given(join_trees(max_nodes=8))
def test_standard_sj_scheme_of_any_tree(p):
    j = structure_forest(p)
    scheme, run = SJScheme.standard(j)
    assert scheme.describes(j, run).ok
    assert _complete_unfolding(scheme, len(j)).is_isomorphic(j)


@settings(max_examples=100)
@given(join_trees(max_nodes=8))
def test_standard_soj_scheme_of_any_tree(p):
    j = structure_ordered(oj_global_from_local(p, {x: p.children(x) for x in p.nodes}))
    scheme, run = SOJScheme.standard(j)
    assert scheme.describes(j, run).ok
    tree = _complete_unfolding(scheme, len(j))
    assert tree.is_valid()
    assert tree.is_isomorphic(j)


@given(binary_join_trees(max_nodes=9))
def test_minimal_scheme_is_unique_up_to_state_names(p):
    j = structure(p)
    scheme, _ = SBJScheme.standard(j)
    m = minimize(scheme)
    assert len(m.states) == len({j.node_code(x) for x in j.nodes})
    assert minimize(m).key() == m.key()
    renamed = _copies(scheme, 1, lambda x, i: f"z{x}")
    assert minimize(renamed).key() == m.key()


@settings(max_examples=20)
@given(binary_join_trees(max_nodes=8), binary_join_trees(max_nodes=8))
def test_split_states_collapse(p, other):
    j, k = structure(p), structure(other)
    scheme, _ = SBJScheme.standard(j)
    split = _copies(scheme, 2, lambda x, i: f"{x}#{i}")
    assert len(split.states) == 2 * len(scheme.states)
    assert minimize(split).key() == minimize(scheme).key()
    assert iso_schemes(split, scheme).verdict is Verdict.ISO
    unfolded = _complete_unfolding(split, len(j))
    assert unfolded.canonical_code() == j.canonical_code()
    verdict = iso_schemes(split, SBJScheme.standard(k)[0]).verdict
    assert verdict is not Verdict.UNKNOWN
    assert (verdict is Verdict.ISO) == (unfolded.canonical_code() == k.canonical_code())
