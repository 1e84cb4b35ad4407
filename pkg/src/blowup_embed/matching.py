"""Maximum bipartite matching and Hall violators."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import bitset

Matching = List[Tuple[int, int]]

_INF = float("inf")


@dataclass(frozen=True)
class BipartiteInstance:
    """Left vertices ``0..left_count-1``; ``edges[l]`` is the bitset of right
    neighbors of ``l``."""

    left_count: int
    right_count: int
    edges: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.left_count < 0 or self.right_count < 0:
            raise ValueError("negative side size")
        if len(self.edges) != self.left_count:
            raise ValueError("need one edge bitset per left vertex")
        limit = bitset.full(self.right_count)
        if any(row & ~limit for row in self.edges):
            raise ValueError("edge to a right vertex out of range")

    @classmethod
    def from_lists(cls, right_count: int, neighbors: Sequence[Sequence[int]]) -> "BipartiteInstance":
        return cls(len(neighbors), right_count, tuple(bitset.from_iter(ns) for ns in neighbors))

    def neighborhood(self, lefts) -> int:
        out = 0
        for left in lefts:
            out |= self.edges[left]
        return out


def _hopcroft_karp(inst: BipartiteInstance) -> Tuple[List[int], List[int]]:
    L = inst.left_count
    adj = [bitset.to_list(row) for row in inst.edges]
    match_l = [-1] * L
    match_r = [-1] * inst.right_count
    while True:
        dist = [_INF] * L
        queue = deque()
        for u in range(L):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
        limit = _INF
        while queue:
            u = queue.popleft()
            if dist[u] >= limit:
                continue
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    limit = min(limit, dist[u] + 1)
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if limit == _INF:
            break
        ptr = [0] * L
        for s in range(L):
            if match_l[s] != -1:
                continue
            lefts, rights = [s], []
            while lefts:
                u = lefts[-1]
                nbrs = adj[u]
                moved = False
                while ptr[u] < len(nbrs):
                    v = nbrs[ptr[u]]
                    ptr[u] += 1
                    w = match_r[v]
                    if w == -1:
                        if dist[u] + 1 == limit:
                            rights.append(v)
                            moved = True
                            break
                    elif dist[w] == dist[u] + 1:
                        rights.append(v)
                        lefts.append(w)
                        moved = True
                        break
                if not moved:
                    dist[u] = _INF
                    lefts.pop()
                    if rights:
                        rights.pop()
                    continue
                if len(rights) == len(lefts):
                    for a, b in zip(lefts, rights):
                        match_l[a] = b
                        match_r[b] = a
                    break
    return match_l, match_r


def max_matching(inst: BipartiteInstance) -> Matching:
    """Maximum-cardinality matching as (left, right) pairs sorted by left.

    Layered augmentation (Hopcroft-Karp); vertices are scanned in index
    order, so the result is a deterministic function of the instance.
    """
    match_l, _ = _hopcroft_karp(inst)
    return [(u, v) for u, v in enumerate(match_l) if v != -1]


@dataclass(frozen=True)
class HallOutcome:
    matching: Matching
    violator: Optional[Tuple[int, ...]]

    @property
    def perfect(self) -> bool:
        return self.violator is None


def hall_violator(inst: BipartiteInstance, match_l: Sequence[int], match_r: Sequence[int]) -> Tuple[int, ...]:
    """Left vertices reachable by alternating paths from unmatched left vertices."""
    seen_l = [False] * inst.left_count
    seen_r = 0
    queue = deque(u for u in range(inst.left_count) if match_l[u] == -1)
    for u in queue:
        seen_l[u] = True
    while queue:
        u = queue.popleft()
        fresh = inst.edges[u] & ~seen_r
        seen_r |= fresh
        for v in bitset.iter_bits(fresh):
            w = match_r[v]
            if w != -1 and not seen_l[w]:
                seen_l[w] = True
                queue.append(w)
    return tuple(u for u in range(inst.left_count) if seen_l[u])


def perfect_or_violator(inst: BipartiteInstance) -> HallOutcome:
    """Either a perfect matching of a square instance or a set S of left
    vertices with |N(S)| < |S|."""
    if inst.left_count != inst.right_count:
        raise ValueError(f"instance is {inst.left_count}x{inst.right_count}, not square")
    match_l, match_r = _hopcroft_karp(inst)
    matching = [(u, v) for u, v in enumerate(match_l) if v != -1]
    if len(matching) == inst.left_count:
        return HallOutcome(matching, None)
    return HallOutcome(matching, hall_violator(inst, match_l, match_r))


def is_matching(inst: BipartiteInstance, matching: Matching) -> bool:
    lefts = [u for u, _ in matching]
    rights = [v for _, v in matching]
    if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
        return False
    return all(0 <= u < inst.left_count and inst.edges[u] >> v & 1 for u, v in matching)
