"""Buffer selection, the initial order S and the low-degree exceptional set E^1."""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from ..graph import Pattern, ball
from ..util import ceil_frac
from .cascade import ParameterCascade
from .state import PREPROCESSING_FAILURE, EmbeddingFailure, EmbeddingState


def select_buffers(
    pattern: Pattern,
    cascade: ParameterCascade,
    rng: random.Random,
    N: int,
    quota: Optional[int] = None,
) -> List[List[int]]:
    """Pick ceil(d1 * N) buffer vertices in every X_i.

    Greedy over a shuffled scan, round-robin across clusters; a chosen vertex
    forbids its radius-2 ball, so buffers are pairwise at distance >= 3 in H
    (across clusters too, which keeps buffer neighborhoods free of buffers).
    """
    r = pattern.cluster_graph.r
    sizes = pattern.class_sizes()
    if any(s != N for s in sizes):
        raise ValueError(f"buffer selection needs |X_i| = N = {N} for every cluster, got {sizes}")
    if quota is None:
        quota = ceil_frac(cascade.value("d1") * N)
    scans = []
    for i in range(r):
        xs = list(pattern.cluster_vertices(i))
        rng.shuffle(xs)
        scans.append(xs)
    pos = [0] * r
    chosen: List[List[int]] = [[] for _ in range(r)]
    forbidden = 0
    progress = True
    while progress and any(len(c) < quota for c in chosen):
        progress = False
        for i in range(r):
            if len(chosen[i]) >= quota:
                continue
            xs = scans[i]
            while pos[i] < len(xs) and forbidden >> xs[pos[i]] & 1:
                pos[i] += 1
            if pos[i] == len(xs):
                continue
            x = xs[pos[i]]
            pos[i] += 1
            chosen[i].append(x)
            forbidden |= ball(pattern.graph, x, 2)
            progress = True
    if any(len(c) < quota for c in chosen):
        raise EmbeddingFailure(
            PREPROCESSING_FAILURE,
            f"could only place {[len(c) for c in chosen]} buffer vertices, quota {quota} per cluster",
            {"achieved": [len(c) for c in chosen], "quota": quota},
        )
    return chosen


def initial_order(pattern: Pattern, buffers: List[List[int]], rng: random.Random) -> Tuple[List[int], int]:
    """S = buffer neighborhoods, then the other non-buffers (shuffled within
    each cluster, clusters interleaved), then the
    buffers. Returns (S, T0) with T0 the length of the neighborhood prefix."""
    is_buffer = [False] * pattern.n
    flat = [b for bs in buffers for b in bs]
    for b in flat:
        is_buffer[b] = True
    prefix: List[int] = []
    seen = set()
    for b in flat:
        for y in pattern.graph.neighbors(b):
            if not is_buffer[y] and y not in seen:
                seen.add(y)
                prefix.append(y)
    return prefix + _interleaved(pattern, is_buffer, seen, rng) + flat, len(prefix)


def _interleaved(pattern: Pattern, is_buffer: List[bool], skip: set, rng: random.Random) -> List[int]:
    """Shuffle each cluster's leftover vertices, then merge the clusters
    proportionally so every class is consumed at the same rate."""
    keyed = []
    for i in range(pattern.cluster_graph.r):
        xs = [x for x in pattern.cluster_vertices(i) if not is_buffer[x] and x not in skip]
        rng.shuffle(xs)
        offset = rng.random()
        keyed.extend(((k + offset) / len(xs), i, x) for k, x in enumerate(xs))
    keyed.sort()
    return [x for _, _, x in keyed]


def _far_vertices(state: EmbeddingState, need: List[int], blocked: int, candidates) -> Tuple[List[int], List[int]]:
    """Greedily choose ``need[i]`` candidates per cluster, pairwise at distance
    >= 3 and outside the ``blocked`` vertex set. Returns (chosen, shortfall)."""
    chosen: List[int] = []
    left = list(need)
    g = state.pattern.graph
    for x in candidates:
        if not any(left):
            break
        i = state.psi[x]
        if left[i] <= 0 or blocked >> x & 1:
            continue
        b2 = ball(g, x, 2)
        chosen.append(x)
        left[i] -= 1
        blocked |= b2
    return chosen, left


def detect_exceptional_G1(state: EmbeddingState) -> None:
    """E_i^1: vertices of V_i with deg(v, V_j) < (d_ij - eps) N for some
    neighbor class j. Brings an equal number of far-apart non-buffer
    H-vertices per cluster to the front of S and adds them to T0."""
    host, th, N = state.host, state.th, state.N
    for i in range(state.r):
        low = set()
        for j in host.cluster_graph.neighbors(i):
            bound = (th.densities[(i, j)] - th.eps) * N
            low.update(a for a, row in enumerate(host.pair_rows(i, j)) if row.bit_count() < bound)
        state.E1[i] = sorted(low)
    need = [len(e) for e in state.E1]
    state.diag.E1_sizes = need
    bound = state.r * th.eps * N
    state.diag.E1_bound_ok = all(k <= bound for k in need)
    if not any(need):
        return
    blocked = 0
    for bs in state.buffers:
        for b in bs:
            blocked |= ball(state.pattern.graph, b, 2)
    candidates = [x for x in state.order if not state.is_buffer[x]]
    chosen, short = _far_vertices(state, need, blocked, candidates)
    if any(short):
        raise EmbeddingFailure(
            PREPROCESSING_FAILURE,
            f"not enough far-apart H-vertices for E^1 (missing {short} per cluster)",
            {"E1_sizes": need, "missing": short},
        )
    state.EH1 = set(chosen)
    state.diag.EH1 = len(chosen)
    for i in range(state.r):
        state.pools[(1, i)] = list(state.E1[i])
    state.bring_forward(chosen)
    state.T0 += len(chosen)
