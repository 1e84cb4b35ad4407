import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blowup_embed import bitset
from blowup_embed.generators import blowup, cluster_graph_from_spec
from blowup_embed.graph import (
    ClusterGraph,
    PartitionedHost,
    Pattern,
    SimpleGraph,
    ball,
    bfs_distance,
    bfs_layers,
    degree_into,
    density,
    edges_between,
)


@st.composite
def simple_graphs(draw, max_n=14):
    n = draw(st.integers(0, max_n))
    pairs = list(combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return SimpleGraph.from_edges(n, edges)


def naive_distance(g, u, v):
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for w in frontier:
            for z in range(g.n):
                if g.has_edge(w, z) and z not in dist:
                    dist[z] = dist[w] + 1
                    nxt.append(z)
        frontier = nxt
    return dist.get(v)


# -- SimpleGraph ---------------------------------------------------------------


def test_simple_graph_basics():
    g = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 0)])
    assert g.edges() == [(0, 1), (0, 2), (1, 2)]
    assert g.edge_count == 3
    assert g.degree(3) == 0
    assert g.max_degree == 2 and g.min_degree == 0
    assert g.neighbors(1) == (0, 2)


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 5)]])
def test_simple_graph_rejects_bad_edges(edges):
    with pytest.raises(ValueError):
        SimpleGraph.from_edges(3, edges)


def test_simple_graph_rejects_asymmetry_and_loops():
    with pytest.raises(ValueError, match="asymmetric"):
        SimpleGraph(2, (0b10, 0))
    with pytest.raises(ValueError, match="self-loop"):
        SimpleGraph(1, (1,))


@given(simple_graphs())
def test_symmetry_and_handshake(g):
    for u in range(g.n):
        assert not g.has_edge(u, u)
        for v in range(g.n):
            assert g.has_edge(u, v) == g.has_edge(v, u)
    assert sum(g.degree(v) for v in range(g.n)) == 2 * g.edge_count
    assert g.edges() == sorted(g.edges())


# -- ClusterGraph / PartitionedHost / Pattern ----------------------------------


def test_cluster_graph_validation():
    with pytest.raises(ValueError):
        ClusterGraph.from_edges(1, [])
    with pytest.raises(ValueError):
        ClusterGraph.from_edges(3, [(1, 1)])
    R = ClusterGraph.from_edges(3, [(1, 0), (0, 1), (2, 1)])
    assert R.sorted_edges() == [(0, 1), (1, 2)]
    assert R.neighbors(1) == [0, 2]


def test_host_rejects_edges_off_the_cluster_graph():
    R = cluster_graph_from_spec("path:3")
    with pytest.raises(ValueError):
        PartitionedHost.from_edges(R, 2, [(0, 4)])  # clusters 0 and 2 not adjacent
    with pytest.raises(ValueError):
        PartitionedHost.from_edges(R, 2, [(0, 1)])  # inside V_0


def test_host_global_ids(triangle):
    host = PartitionedHost.from_edges(triangle, 3, [(0, 3), (4, 8)])
    assert host.n == 9 and host.r == 3
    assert host.split(8) == (2, 2)
    assert host.vertex(2, 2) == 8
    assert host.cluster_of(4) == 1
    assert host.has_edge(3, 0) and host.has_edge(8, 4)
    assert not host.has_edge(0, 4)
    assert host.edges() == [(0, 3), (4, 8)]
    assert host.degree(4) == 1
    assert host.without_edge(0, 3).edge_count == 1


def test_host_pair_density_is_exact(single_edge):
    host = PartitionedHost.from_edges(single_edge, 2, [(0, 2), (0, 3), (1, 2)])
    assert host.pair_density(0, 1) == Fraction(3, 4)
    assert host.pair_density(1, 0) == Fraction(3, 4)


def test_pattern_requires_homomorphism(single_edge):
    tri = SimpleGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError, match="homomorphism"):
        Pattern(tri, (0, 1, 0), single_edge)


def test_pattern_class_checks(single_edge):
    p = Pattern(SimpleGraph.from_edges(3, [(0, 1), (0, 2)]), (0, 1, 1), single_edge)
    assert p.class_sizes() == [1, 2]
    p.check(2, 2)
    with pytest.raises(ValueError):
        p.check(1)
    with pytest.raises(ValueError):
        p.check(2, 1)
    padded = p.padded(3)
    assert padded.class_sizes() == [3, 3]
    assert padded.graph.edge_count == 2


# -- degree_into / density -----------------------------------------------------


def test_degree_into_examples(single_edge):
    g = SimpleGraph.from_edges(3, [(1, 2)])
    assert degree_into(g, 0, 0b110) == 0
    host = blowup(single_edge, 3)
    assert degree_into(host, 0, host.class_bits(1)) == 3
    with pytest.raises(ValueError):
        degree_into(g, 7, 1)


def test_degree_into_matches_edge_scan():
    rng = random.Random(1)
    for _ in range(30):
        edges = [(u, v) for u, v in combinations(range(20), 2) if rng.random() < 0.3]
        g = SimpleGraph.from_edges(20, edges)
        Y = bitset.from_iter(v for v in range(20) if rng.random() < 0.5)
        v = rng.randrange(20)
        expect = sum(1 for a, b in edges if (a == v and Y >> b & 1) or (b == v and Y >> a & 1))
        assert degree_into(g, v, Y) == expect


def test_density_examples(single_edge):
    full = blowup(single_edge, 4)
    assert density(full, 0b0011, 0b11 << 4) == 1
    empty = PartitionedHost.from_edges(single_edge, 4, [])
    assert density(empty, 0b1, 0b1 << 4) == 0
    host = PartitionedHost.from_edges(single_edge, 4, [(0, 4), (0, 5), (1, 4), (1, 6), (2, 5), (2, 7)])
    assert density(host, 0b0111, 0b1111 << 4) == Fraction(1, 2)


def test_density_errors():
    g = SimpleGraph.from_edges(3, [(0, 1)])
    with pytest.raises(ValueError):
        density(g, 0, 0b10)
    with pytest.raises(ValueError):
        density(g, 0b11, 0b10)


@given(simple_graphs(), st.data())
def test_density_times_sizes_counts_edges(g, data):
    if g.n < 2:
        return
    order = data.draw(st.permutations(range(g.n)))
    k = data.draw(st.integers(1, g.n - 1))
    X, Y = bitset.from_iter(order[:k]), bitset.from_iter(order[k:])
    naive = sum(1 for x in order[:k] for y in order[k:] if g.has_edge(x, y))
    d = density(g, X, Y)
    assert d * X.bit_count() * Y.bit_count() == naive
    assert edges_between(g, X, Y) == naive


def test_degree_sums_equal_pair_edges(triangle):
    from blowup_embed.generators import HostRecipe, random_host

    host = random_host(HostRecipe(triangle, 20, 0.5, 0.3, seed=4))
    for i, j in triangle.sorted_edges():
        Vj = host.class_bits(j)
        total = sum(degree_into(host, host.vertex(i, a), Vj) for a in range(20))
        assert total == host.pair_edge_count(i, j)
        for a in range(20):
            assert degree_into(host, host.vertex(i, a), Vj) == host.row(i, a, j).bit_count()


# -- BFS -----------------------------------------------------------------------


def test_bfs_examples():
    path = SimpleGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert bfs_distance(path, 2, 2) == 0
    assert bfs_distance(path, 1, 2) == 1
    assert bfs_distance(path, 0, 4) == 4
    split = SimpleGraph.from_edges(3, [(0, 1)])
    assert bfs_distance(split, 0, 2) is None
    with pytest.raises(ValueError):
        bfs_distance(split, 0, 3)


@given(simple_graphs(), st.data())
def test_bfs_matches_naive(g, data):
    if g.n == 0:
        return
    u = data.draw(st.integers(0, g.n - 1))
    layers = bfs_layers(g, u)
    for v in range(g.n):
        assert bfs_distance(g, u, v) == naive_distance(g, u, v) == layers[v]
    for radius in range(4):
        expect = {v for v in range(g.n) if layers[v] is not None and layers[v] <= radius}
        assert set(bitset.iter_bits(ball(g, u, radius))) == expect
