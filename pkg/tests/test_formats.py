import pytest

from conftest import SBJ_EXAMPLE
from src.errors import FormatError
from src.formats import (
    parse_betweenness,
    parse_graph,
    parse_layout,
    parse_poset,
    parse_scheme,
    parse_structured,
    write_betweenness,
    write_graph,
    write_listing,
    write_poset,
    write_scheme,
    write_structured,
)
from src.quasitree import betweenness_of_join_tree
from src.term import F, F_SECOND, from_equations
from src.trees import SOJTree, val, val_soj

ALTERNATING = """
kind sbj
axis = (a . b)^w
word a = c
word b = c . c   # two nodes below b
word c = empty
"""


def test_poset_records(path_abcr):
    assert parse_poset("a < b\nb < r\n\n# c hangs from r\nc < r") == path_abcr
    assert parse_poset(write_poset(path_abcr)) == path_abcr


def test_isolated_nodes_are_declared():
    p = parse_poset("node a b")
    assert len(p) == 2
    assert "node a" in write_poset(p)


def test_bad_poset_record_names_its_line():
    with pytest.raises(FormatError, match="line 2"):
        parse_poset("a < b\na <= b")


def test_cyclic_order_is_rejected():
    with pytest.raises(FormatError):
        parse_poset("a < b\nb < a")


def test_structured_tree_text():
    j = val(from_equations(SBJ_EXAMPLE, F))
    assert parse_structured(write_structured(j)) == j


def test_ordered_tree_text_keeps_order_and_minus_lines():
    j = val_soj(from_equations("t = ext2[p](Omega, Omega) . ext2[q](mkh(ext2[l](Omega, Omega)), mkh(ext2[r](Omega, Omega)))", F_SECOND))
    text = write_structured(j)
    assert "order l p r q" in text
    assert "minus l" in text
    back = parse_structured(text)
    assert isinstance(back, SOJTree)
    assert back == j


def test_structured_tree_must_be_valid():
    with pytest.raises(FormatError, match="invalid structure"):
        parse_structured("kind sbj\nline x\nline y\n")


def test_unknown_kind():
    with pytest.raises(FormatError):
        parse_structured("kind tree\nline x")


def test_listing():
    text = write_listing(parse_structured("kind sbj\nline x y\n"))
    assert text.splitlines() == ["sbj-tree with 2 nodes, 1 lines", "  axis: x < y"]


def test_betweenness_text(star):
    s = betweenness_of_join_tree(star)
    assert parse_betweenness(write_betweenness(s)).triples() == s.triples()


def test_symmetric_betweenness_records():
    s = parse_betweenness("B a b c", symmetric=True)
    assert s.triples() == {("a", "b", "c"), ("c", "b", "a")}


def test_bad_betweenness_record():
    with pytest.raises(FormatError):
        parse_betweenness("B a b")


def test_graph_text():
    g = parse_graph("a b\nc")
    assert set(g.nodes) == {"a", "b", "c"}
    assert g.number_of_edges() == 1
    assert parse_graph(write_graph(g)).number_of_edges() == 1


def test_graph_loops_are_rejected():
    with pytest.raises(FormatError, match="loop"):
        parse_graph("a a")


def test_layout_leaves_are_the_vertices():
    g = parse_graph("a b\nb c")
    assert parse_layout("x a\nx b\nx c", g).number_of_nodes() == 4
    with pytest.raises(FormatError):
        parse_layout("a b", g)


def test_scheme_records():
    scheme = parse_scheme(ALTERNATING)
    assert scheme.kind == "sbj"
    assert scheme.states == ("a", "b", "c")
    assert parse_scheme(write_scheme(scheme)).key() == scheme.key()


def test_sj_scheme_records():
    scheme = parse_scheme("kind sj\naxis = r\nmset r = d:3\nmset l = \ndir d = l")
    assert scheme.kind == "sj"
    assert scheme.multisets["r"]["d"] == 3
    assert parse_scheme(write_scheme(scheme)).key() == scheme.key()


@pytest.mark.parametrize(
    "text, message",
    [
        ("kind sbj\nword a = b", "no axis"),
        ("kind sbj\naxis = a\naxis = a", "twice"),
        ("kind sbj\naxis = a\nword a = empty\nword a = a", "twice"),
        ("kind sbj\naxis = a\ndir d = a", "do not belong"),
        ("kind sbj\naxis = a\nfoo a", "unknown record"),
        ("kind tree\naxis = a", "kind"),
    ],
)
def test_scheme_errors(text, message):
    with pytest.raises(FormatError, match=message):
        parse_scheme(text)
