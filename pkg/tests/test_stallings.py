"""Tests for `pyfreegroups.stallings`."""
from hypothesis import given, strategies as st
import networkx as nx
from networkx.algorithms.isomorphism import categorical_multiedge_match
import pytest

from pyfreegroups.exceptions import InfiniteIndexException
from pyfreegroups.stallings import (
    bad_vertices,
    build,
    coset_data,
    enumerate_elements,
    index,
    membership,
)
from pyfreegroups.words import (
    Word,
    invert,
    parse_word,
    power,
    product,
    reduced_words,
    shortlex_key,
)

from .const import EXAMPLE_A2_GENERATORS, INDEX_TWO_IMAGES
from .helpers import words


def graph_of(*texts: str, rank: int = 2):
    return build(rank, [parse_word(text, rank) for text in texts])


def test_cyclic_subgroup():
    graph = graph_of("a")
    assert graph.vertex_count == 1
    assert len(graph.edges) == 1
    assert graph.subgroup_rank == 1
    assert graph.valence(0) == 2
    assert graph.missing_letters(0) == (2, -2)
    assert index(graph) is None
    assert not graph.is_covering


def test_whole_group():
    graph = graph_of("a", "b")
    assert graph.is_covering
    assert index(graph) == 1
    assert bad_vertices(graph) == []


def test_trivial_subgroup():
    graph = build(2, [])
    assert graph.vertex_count == 1
    assert graph.edges == ()
    assert graph.subgroup_rank == 0
    assert membership(graph, Word.identity(2)) == Word.identity(1)


def test_index_two(index_two_hom):
    graph = build(2, index_two_hom.images)
    assert graph.vertex_count == 2
    assert index(graph) == 2
    assert graph.subgroup_rank == 3
    data = coset_data(graph)
    assert data.exponents == (2, 1)
    assert data.quotient_order == 2
    assert data.as_dict()["permutations"] == [[1, 0], [0, 1]]


def test_coset_data_infinite_index():
    with pytest.raises(InfiniteIndexException):
        coset_data(graph_of("a"))


def test_a2_graph(a2_graph):
    assert a2_graph.vertex_count == 7
    assert len(a2_graph.edges) == 9
    assert a2_graph.subgroup_rank == 3
    assert a2_graph.relations == ()
    assert [vertex.vertex for vertex in bad_vertices(a2_graph)] == [1, 2, 3, 4, 5, 6]
    assert all(vertex.bad for vertex in bad_vertices(a2_graph))


def test_a2_membership(a2_graph):
    assert membership(a2_graph, parse_word("abAB")) == parse_word("a", 3)
    assert membership(a2_graph, parse_word("bbbb")) == parse_word("b", 3)
    assert membership(a2_graph, parse_word("aaa")) == parse_word("c", 3)
    assert membership(a2_graph, parse_word("abABAAA")) == parse_word("aC", 3)
    assert membership(a2_graph, parse_word("a")) is None
    assert membership(a2_graph, parse_word("bb")) is None


def test_read(a2_graph):
    assert a2_graph.read(0, parse_word("bbbb")) == 0
    assert a2_graph.read(0, parse_word("bb")) not in (None, 0)
    assert a2_graph.read(0, parse_word("Aba")) is None
    assert any(a2_graph.read(v, parse_word("Aba")) is not None for v in a2_graph.vertices)
    assert all(a2_graph.read(v, parse_word("Abaa")) is None for v in a2_graph.vertices)


def test_relations():
    graph = graph_of("a", "a")
    assert graph.relations == (parse_word("Ab"),)
    assert graph.subgroup_rank == 1
    assert all(graph.expand(relation).is_identity for relation in graph.relations)


def test_identity_generator_is_a_relation():
    graph = graph_of("a", "1")
    assert parse_word("b") in graph.relations


def test_relations_of_dependent_generators():
    graph = graph_of("a", "b", "ab")
    assert graph.relations
    for relation in graph.relations:
        assert not relation.is_identity
        assert graph.expand(relation).is_identity


def test_base_hair_is_kept():
    graph = graph_of("baB")
    assert graph.vertex_count == 2
    assert graph.valence(graph.base) == 1
    assert membership(graph, parse_word("baaB")) == parse_word("aa", 1)


def test_canonical_form():
    assert graph_of("ab", "ba") == graph_of("ba", "ab")
    assert graph_of("AB") == graph_of("ba")
    assert hash(graph_of("AB")) == hash(graph_of("ba"))
    assert graph_of(*reversed(EXAMPLE_A2_GENERATORS)) == graph_of(*EXAMPLE_A2_GENERATORS)
    assert graph_of("ab") != graph_of("ba")


def test_to_networkx(a2_graph):
    graph = a2_graph.to_networkx()
    assert graph.number_of_nodes() == 7
    assert graph.number_of_edges() == 9
    assert graph.nodes[0]["base"]
    assert [vertex for vertex, bad in graph.nodes(data="bad") if bad] == [1, 2, 3, 4, 5, 6]
    other = graph_of("bbbb", "aaa", "abAB").to_networkx()
    assert nx.is_isomorphic(
        graph, other, edge_match=categorical_multiedge_match("label", None)
    )


def test_as_dict():
    data = graph_of("a", *INDEX_TWO_IMAGES[1:]).as_dict()
    assert data["rank"] == 2
    assert data["base"] == 0
    assert data["vertices"] == list(range(len(data["vertices"])))
    assert {"src", "dst", "label", "weight"} <= set(data["edges"][0])


def test_enumerate_elements():
    assert [str(g) for g in enumerate_elements(graph_of("a"), 2)] == [
        "1",
        "a",
        "A",
        "aa",
        "AA",
    ]
    elements = enumerate_elements(graph_of("ab"), 4)
    assert [str(g) for g in elements] == ["1", "ab", "BA", "abab", "BABA"]


@given(
    st.lists(words(max_size=4), min_size=1, max_size=3),
    st.lists(st.integers(min_value=0, max_value=5), max_size=6),
)
def test_membership_of_products(generators, choices):
    graph = build(2, generators)
    size = len(generators)
    g = product(
        (
            generators[choice % size] if choice < size else ~generators[choice % size]
            for choice in choices
        ),
        2,
    )
    witness = membership(graph, g)
    assert witness is not None
    assert graph.expand(witness) == g


INDEX_THREE_GENERATORS = ["aaa", "b", "abA", "aabAA"]


@pytest.mark.parametrize(
    "generators,max_len",
    [(EXAMPLE_A2_GENERATORS, 8), (INDEX_TWO_IMAGES, 6), (["ab", "aaB"], 6)],
)
def test_enumerate_elements_naive_ball(generators, max_len):
    graph = graph_of(*generators)
    elements = enumerate_elements(graph, max_len)
    assert len(set(elements)) == len(elements)
    assert elements == sorted(elements, key=shortlex_key)
    ball = [g for g in reduced_words(2, max_len) if membership(graph, g) is not None]
    assert elements == ball
    # short products of the generators land in the ball
    letters = [parse_word(text, 2) for text in generators]
    letters += [invert(g) for g in letters]
    for first in letters:
        for second in letters:
            g = first * second
            if len(g) <= max_len:
                assert g in elements


def test_index_three():
    graph = graph_of(*INDEX_THREE_GENERATORS)
    assert index(graph) == 3
    assert coset_data(graph).exponents == (3, 1)


@pytest.mark.parametrize("generators", [INDEX_TWO_IMAGES, INDEX_THREE_GENERATORS])
@given(g=words())
def test_lagrange(generators, g):
    graph = graph_of(*generators)
    order = 1
    for factor in range(2, index(graph) + 1):
        order *= factor
    assert membership(graph, power(g, order)) is not None


@given(
    st.lists(words(max_size=5), min_size=1, max_size=4),
    st.randoms(use_true_random=False),
    st.lists(st.booleans(), min_size=4, max_size=4),
)
def test_folding_is_confluent(generators, random, flips):
    shuffled = list(generators)
    random.shuffle(shuffled)
    shuffled = [~g if flip else g for g, flip in zip(shuffled, flips)]
    assert build(2, shuffled) == build(2, generators)
