from itertools import combinations, product
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entropy_mirage.graph import (
    SizeLimitError,
    adjacency_matrix,
    are_isomorphic,
    build_graph,
    canonical_form,
    degree_sequence,
    edge_density,
    format_edge_list,
    graph_from_bits,
    is_graphical,
    load_graph,
    parse_edge_list,
    realize_graph,
    relabel,
    save_graph,
    upper_triangle_bits,
)

from oracles import brute_canonical, graphical_multisets


@st.composite
def graphs(draw, min_nodes=1, max_nodes=8):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = list(combinations(range(1, n + 1), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return build_graph(n, [p for p, keep in zip(pairs, mask) if keep])


@st.composite
def graph_and_perm(draw, max_nodes=8):
    g = draw(graphs(max_nodes=max_nodes))
    perm = draw(st.permutations(list(range(1, g.node_count + 1))))
    return g, perm


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(1, g.node_count + 1))
    h.add_edges_from(g.edges)
    return h


def path(n):
    return build_graph(n, [(i, i + 1) for i in range(1, n)])


def cycle(n):
    return build_graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


class TestBuild:
    def test_normalizes_and_sorts(self):
        g = build_graph(3, [(3, 1), (2, 1)])
        assert g.edges == ((1, 2), (1, 3))

    @pytest.mark.parametrize(
        "n, edges",
        [(3, [(1, 4)]), (3, [(0, 1)]), (3, [(2, 2)]), (3, [(1, 2), (2, 1)]), (0, [])],
    )
    def test_rejects_bad_input(self, n, edges):
        with pytest.raises(ValueError):
            build_graph(n, edges)

    def test_single_edge_matrix(self):
        a = adjacency_matrix(build_graph(2, [(1, 2)]))
        assert a.tolist() == [[0, 1], [1, 0]]

    def test_has_edge(self):
        g = path(3)
        assert g.has_edge(2, 1) and not g.has_edge(1, 3)


class TestDegreesAndDensity:
    def test_triangle(self):
        g = build_graph(3, [(1, 2), (2, 3), (1, 3)])
        assert degree_sequence(g) == [2, 2, 2]
        assert edge_density(g) == 1

    def test_density_is_exact(self):
        assert edge_density(path(4)) == Fraction(1, 2)

    def test_density_needs_two_nodes(self):
        with pytest.raises(ValueError):
            edge_density(build_graph(1, []))

    @given(graphs())
    def test_matrix_properties(self, g):
        a = adjacency_matrix(g)
        assert np.array_equal(a, a.T)
        assert not a.diagonal().any()
        assert sum(degree_sequence(g)) == 2 * g.edge_count == int(a.sum())


class TestBits:
    def test_row_major_order(self):
        g = build_graph(4, [(1, 3), (3, 4)])
        assert upper_triangle_bits(g) == "010001"

    @given(graphs())
    def test_round_trip(self, g):
        assert graph_from_bits(g.node_count, upper_triangle_bits(g)) == g

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            graph_from_bits(4, "01")


class TestGraphical:
    @pytest.mark.parametrize(
        "seq, expected",
        [([3, 3, 3, 3], True), ([3, 3, 1, 1], False), ([1, 1, 1], False), ([], True), ([0], True), ([2, 2, 2], True)],
    )
    def test_examples(self, seq, expected):
        assert is_graphical(seq) is expected

    def test_negative_entry(self):
        with pytest.raises(ValueError):
            is_graphical([1, -1])

    def test_matches_brute_force_up_to_five(self):
        for n in range(6):
            realizable = graphical_multisets(n)
            for seq in product(range(n + 1), repeat=n):
                assert is_graphical(seq) == (tuple(sorted(seq)) in realizable), seq

    def test_realize_k4(self):
        g = realize_graph([3, 3, 3, 3])
        assert g.edge_count == 6

    def test_realize_rejects_non_graphical(self):
        with pytest.raises(ValueError):
            realize_graph([3, 3, 1, 1])

    @given(graphs())
    def test_realization_round_trip(self, g):
        seq = degree_sequence(g)
        assert is_graphical(seq)
        assert degree_sequence(realize_graph(seq)) == seq


class TestIsomorphism:
    def test_c6_vs_two_triangles(self):
        two_k3 = build_graph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
        assert degree_sequence(cycle(6)) == degree_sequence(two_k3)
        assert not are_isomorphic(cycle(6), two_k3)

    def test_relabelled_path(self):
        assert are_isomorphic(path(3), build_graph(3, [(1, 3), (3, 2)]))

    def test_size_limit(self):
        with pytest.raises(SizeLimitError):
            are_isomorphic(path(31), path(31))

    def test_relabel_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            relabel(path(3), [1, 1, 2])

    @given(graph_and_perm(max_nodes=10))
    def test_invariant_under_relabelling(self, gp):
        g, perm = gp
        assert are_isomorphic(g, relabel(g, perm))

    @settings(max_examples=200)
    @given(graphs(max_nodes=7), graphs(max_nodes=7))
    def test_agrees_with_networkx(self, g, h):
        assert are_isomorphic(g, h) == nx.is_isomorphic(to_nx(g), to_nx(h))


class TestCanonicalForm:
    def test_triangle(self):
        assert canonical_form(build_graph(3, [(1, 2), (2, 3), (1, 3)])) == "111"

    def test_two_nodes(self):
        assert canonical_form(build_graph(2, [(1, 2)])) == "1"
        assert canonical_form(build_graph(2, [])) == "0"

    def test_eleven_classes_on_four_nodes(self):
        pairs = list(combinations(range(1, 5), 2))
        forms = {
            canonical_form(build_graph(4, [p for p, keep in zip(pairs, mask) if keep]))
            for mask in product((0, 1), repeat=6)
        }
        assert len(forms) == 11

    @settings(max_examples=150)
    @given(graphs(max_nodes=6))
    def test_matches_exhaustive_minimum(self, g):
        assert canonical_form(g) == brute_canonical(g.node_count, g.edges)

    @given(graph_and_perm(max_nodes=12))
    def test_invariant_under_relabelling(self, gp):
        g, perm = gp
        assert canonical_form(g) == canonical_form(relabel(g, perm))

    @settings(max_examples=200)
    @given(graphs(max_nodes=7), graphs(max_nodes=7))
    def test_equal_iff_isomorphic(self, g, h):
        same = g.node_count == h.node_count and canonical_form(g) == canonical_form(h)
        assert same == nx.is_isomorphic(to_nx(g), to_nx(h))

    def test_is_a_valid_description(self):
        g = cycle(6)
        bits = canonical_form(g)
        assert are_isomorphic(graph_from_bits(6, bits), g)

    def test_size_limit(self):
        with pytest.raises(SizeLimitError):
            canonical_form(path(17))


class TestEdgeListIO:
    def test_format(self):
        assert format_edge_list(path(3)) == "# nodes=3\n1 2\n2 3\n"

    def test_isolated_nodes_survive(self, tmp_path):
        g = build_graph(5, [(1, 2)])
        save_graph(g, tmp_path / "g.txt")
        assert load_graph(tmp_path / "g.txt") == g

    @pytest.mark.parametrize("text", ["1 2\n", "# nodes=3\n1 2 3\n", "# nodes=2\n1 3\n", "# nodes=3\n1 2\n2 1\n"])
    def test_bad_files(self, text):
        with pytest.raises(ValueError):
            parse_edge_list(text)

    @given(graphs())
    def test_round_trip(self, g):
        assert parse_edge_list(format_edge_list(g)) == g
