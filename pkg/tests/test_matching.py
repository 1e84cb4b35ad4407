import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blowup_embed import bitset
from blowup_embed.matching import BipartiteInstance, is_matching, max_matching, perfect_or_violator
from oracles import brute_force_max_matching, hall_holds


@st.composite
def instances(draw, max_side=7, square=False):
    L = draw(st.integers(0, max_side))
    R = L if square else draw(st.integers(0, max_side))
    rows = draw(st.lists(st.integers(0, (1 << R) - 1 if R else 0), min_size=L, max_size=L))
    return BipartiteInstance(L, R, tuple(rows))


def test_instance_validation():
    with pytest.raises(ValueError):
        BipartiteInstance(2, 2, (1,))
    with pytest.raises(ValueError):
        BipartiteInstance(1, 2, (0b100,))
    with pytest.raises(ValueError):
        BipartiteInstance(-1, 0, ())


@pytest.mark.parametrize("n", [0, 1, 5, 40])
def test_identity_instance(n):
    inst = BipartiteInstance.from_lists(n, [[i] for i in range(n)])
    assert max_matching(inst) == [(i, i) for i in range(n)]


def test_empty_edges():
    assert max_matching(BipartiteInstance(4, 3, (0, 0, 0, 0))) == []


def test_complete_instance_is_perfect():
    inst = BipartiteInstance(6, 6, (bitset.full(6),) * 6)
    out = perfect_or_violator(inst)
    assert out.perfect and len(out.matching) == 6 and is_matching(inst, out.matching)


def test_two_left_share_one_right():
    inst = BipartiteInstance.from_lists(2, [[0], [0]])
    out = perfect_or_violator(inst)
    assert not out.perfect
    assert sorted(out.violator) == [0, 1]
    assert inst.neighborhood(out.violator).bit_count() == 1


def test_non_square_rejected():
    with pytest.raises(ValueError, match="square"):
        perfect_or_violator(BipartiteInstance(2, 3, (1, 2)))


def test_deterministic():
    rng = random.Random(5)
    rows = tuple(rng.getrandbits(30) for _ in range(30))
    inst = BipartiteInstance(30, 30, rows)
    assert max_matching(inst) == max_matching(inst)


def test_needs_augmenting_paths():
    # greedy in index order takes (0,0) and then gets stuck; the maximum is 3
    inst = BipartiteInstance.from_lists(3, [[0, 1], [0], [1, 2]])
    m = max_matching(inst)
    assert len(m) == 3 and is_matching(inst, m)


@given(instances())
def test_matching_is_valid_and_maximum(inst):
    m = max_matching(inst)
    assert is_matching(inst, m)
    assert [u for u, _ in m] == sorted(u for u, _ in m)
    assert len(m) == brute_force_max_matching(inst)


@given(instances(square=True))
def test_perfect_or_violator_is_total(inst):
    out = perfect_or_violator(inst)
    assert is_matching(inst, out.matching)
    if out.perfect:
        assert len(out.matching) == inst.left_count
        assert hall_holds(inst)
    else:
        S = out.violator
        assert S and inst.neighborhood(S).bit_count() < len(S)
        assert not hall_holds(inst)


def test_is_matching_rejects_bad_matchings():
    inst = BipartiteInstance.from_lists(2, [[0, 1], [0]])
    assert not is_matching(inst, [(0, 0), (1, 0)])
    assert not is_matching(inst, [(1, 1)])
    assert is_matching(inst, [(0, 1), (1, 0)])


def test_large_dense_instance_is_fast():
    rng = random.Random(0)
    n = 400
    rows = tuple(bitset.from_iter(v for v in range(n) if rng.random() < 0.3) for _ in range(n))
    out = perfect_or_violator(BipartiteInstance(n, n, rows))
    assert out.perfect
