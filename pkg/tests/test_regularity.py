import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blowup_embed import bitset
from blowup_embed.generators import HostRecipe, blowup, cluster_graph_from_spec, random_host
from blowup_embed.graph import PartitionedHost
from blowup_embed.regularity import (
    IRREGULAR_WITNESSED,
    NO_WITNESS_FOUND,
    REGULAR_CERTIFIED,
    BipartitePair,
    CapabilityError,
    check_regular_exact,
    check_regular_sampled,
    check_super_regular,
    list_low_degree_vertices,
    min_subset_size,
    witness_is_valid,
)


def complete(a, b):
    return BipartitePair(tuple([bitset.full(b)] * a), b)


def empty(a, b):
    return BipartitePair((0,) * a, b)


def random_pair(rng, a, b, p):
    return BipartitePair(tuple(bitset.from_iter(y for y in range(b) if rng.random() < p) for _ in range(a)), b)


def planted_block_pair(seed=0):
    """10x10, density 0.3 background with a complete 3x3 block on {0,1,2}^2."""
    rng = random.Random(seed)
    rows = []
    for a in range(10):
        row = bitset.from_iter(b for b in range(10) if rng.random() < 0.3)
        if a < 3:
            row |= 0b111
        rows.append(row)
    return BipartitePair(tuple(rows), 10)


def brute_force_regular(pair, eps):
    eps = Fraction(eps)
    A, B = pair.left_count, pair.right_count
    d = pair.density()
    for X in range(1, 1 << A):
        if X.bit_count() <= eps * A:
            continue
        for Y in range(1, 1 << B):
            if Y.bit_count() <= eps * B:
                continue
            if abs(pair.sub_density(X, Y) - d) >= eps:
                return False
    return True


@st.composite
def small_pairs(draw, max_side=6):
    a = draw(st.integers(1, max_side))
    b = draw(st.integers(1, max_side))
    rows = draw(st.lists(st.integers(0, (1 << b) - 1), min_size=a, max_size=a))
    return BipartitePair(tuple(rows), b)


def test_min_subset_size_is_strictly_above():
    assert min_subset_size(Fraction(1, 5), 10) == 3
    assert min_subset_size(Fraction(1, 4), 10) == 3
    assert min_subset_size(Fraction(1, 20), 10) == 1


@pytest.mark.parametrize("eps", [0.05, 0.2, 0.5])
def test_complete_and_empty_are_certified(eps):
    assert check_regular_exact(complete(8, 8), eps).status == REGULAR_CERTIFIED
    assert check_regular_exact(empty(8, 8), eps).status == REGULAR_CERTIFIED


def test_planted_block_is_witnessed():
    pair = planted_block_pair()
    d = pair.density()
    # the planted block alone already qualifies: 3 > 0.2 * 10 and |1 - d| >= 0.2
    assert 1 - d >= Fraction(1, 5)
    v = check_regular_exact(pair, 0.2)
    assert v.status == IRREGULAR_WITNESSED
    assert witness_is_valid(pair, 0.2, v.witness)
    assert v.witness.deviation >= 1 - d


def test_exact_rejects_large_pairs():
    with pytest.raises(CapabilityError):
        check_regular_exact(complete(15, 3), 0.1)
    with pytest.raises(ValueError):
        check_regular_exact(complete(3, 3), 1)


@given(small_pairs(), st.sampled_from([Fraction(1, 10), Fraction(1, 5), Fraction(1, 3), Fraction(1, 2)]))
def test_exact_matches_brute_force(pair, eps):
    v = check_regular_exact(pair, eps)
    assert (v.status == REGULAR_CERTIFIED) == brute_force_regular(pair, eps)
    if v.irregular:
        assert witness_is_valid(pair, eps, v.witness)


@given(small_pairs(max_side=8), st.integers(0, 2**32), st.sampled_from([0.1, 0.25]))
def test_sampled_witnesses_are_sound(pair, seed, eps):
    v = check_regular_sampled(pair, eps, 50, seed)
    assert v.status in (IRREGULAR_WITNESSED, NO_WITNESS_FOUND)
    if v.irregular:
        assert witness_is_valid(pair, eps, v.witness)
        assert not check_regular_exact(pair, eps).status == REGULAR_CERTIFIED


def test_sampled_examples():
    assert check_regular_sampled(complete(30, 30), 0.1, 200, seed=1).status == NO_WITNESS_FOUND
    v1 = check_regular_sampled(planted_block_pair(), 0.2, 500, seed=3)
    v2 = check_regular_sampled(planted_block_pair(), 0.2, 500, seed=3)
    assert v1 == v2
    with pytest.raises(ValueError):
        check_regular_sampled(complete(3, 3), 0.1, 0, seed=0)


def test_sampled_finds_planted_block_mostly():
    # flaky-tolerant: at most 1 miss in 20 independent repetitions
    pair = planted_block_pair()
    misses = sum(not check_regular_sampled(pair, 0.2, 10000, seed=s).irregular for s in range(20))
    assert misses <= 1


def test_witness_validation_catches_tampering():
    pair = planted_block_pair()
    w = check_regular_exact(pair, 0.2).witness
    from dataclasses import replace

    assert not witness_is_valid(pair, 0.2, replace(w, X=0b1))
    assert not witness_is_valid(pair, 0.2, replace(w, d_XY=w.d_XY / 2))


# -- super-regularity ------------------------------------------------------------


def test_super_regular_complete():
    v = check_super_regular(complete(6, 6), 0.3, 0.9, 0.9)
    assert v.ok and v.degree_ok_A and v.degree_ok_B and v.density_ok
    assert v.regularity.status == REGULAR_CERTIFIED


def test_super_regular_isolated_vertex():
    rows = (0,) + (bitset.full(6),) * 5
    v = check_super_regular(BipartitePair(rows, 6), 0.3, 0.5, 0.2)
    assert not v.degree_ok_A and v.degree_ok_B
    assert v.low_A == (0,)
    assert v.min_deg_A == 0
    assert not v.ok


def test_super_regular_random_pair_degrees(single_edge):
    host = random_host(HostRecipe(single_edge, 200, 0.5, 0.3, seed=11))
    pair = BipartitePair.from_host(host, 0, 1)
    v = check_super_regular(pair, 0.1, 0.45, 0.3, trials=100, seed=0)
    assert v.degree_ok_A and v.degree_ok_B
    assert v.min_deg_A == min(r.bit_count() for r in pair.rows)
    assert v.min_deg_B == min(c.bit_count() for c in pair.cols)


@given(small_pairs(), st.sampled_from([0.1, 0.3, 0.6]))
def test_super_regular_degree_flags_match_scan(pair, delta):
    v = check_super_regular(pair, 0.3, 0.1, delta)
    A, B = pair.left_count, pair.right_count
    assert v.degree_ok_A == all(r.bit_count() >= Fraction(str(delta)) * B for r in pair.rows)
    assert v.degree_ok_B == all(c.bit_count() >= Fraction(str(delta)) * A for c in pair.cols)


# -- low-degree listing ----------------------------------------------------------


def test_low_degree_examples(single_edge):
    assert list_low_degree_vertices(blowup(single_edge, 5), 0, 1, 0.9) == []
    host = random_host(HostRecipe(single_edge, 40, 0.9, 0.25, 1 / 40, seed=1))
    # vertex 0 of each class is degraded to ceil(0.25 * 40) = 10 neighbors
    assert list_low_degree_vertices(host, 0, 1, 0.5) == [0]
    assert list_low_degree_vertices(host, 1, 0, 0.5) == [40]
    path = PartitionedHost.from_edges(cluster_graph_from_spec("path:3"), 2, [])
    with pytest.raises(ValueError):
        list_low_degree_vertices(path, 0, 2, 0.5)
