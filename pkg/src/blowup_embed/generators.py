"""Seeded constructions: blow-ups R(N), random super-regular hosts, patterns."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import bitset
from .graph import ClusterGraph, PartitionedHost, Pattern, SimpleGraph
from .util import as_fraction, ceil_frac, floor_frac


def _rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), *tags]))


def _pack(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row.astype(np.uint8), bitorder="little").tobytes(), "little")


def cluster_graph_from_spec(spec: str) -> ClusterGraph:
    """Parse ``triangle``, ``edge``, ``cycle:R``, ``complete:R``, ``path:R`` or
    ``edges:R:0-1,1-2``."""
    spec = spec.strip().lower()
    if spec == "triangle":
        return ClusterGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    if spec == "edge":
        return ClusterGraph.from_edges(2, [(0, 1)])
    m = re.fullmatch(r"(cycle|complete|path):(\d+)", spec)
    if m:
        kind, r = m.group(1), int(m.group(2))
        if kind == "cycle":
            if r < 3:
                raise ValueError("cycle needs r >= 3")
            return ClusterGraph.from_edges(r, [(i, (i + 1) % r) for i in range(r)])
        if kind == "path":
            return ClusterGraph.from_edges(r, [(i, i + 1) for i in range(r - 1)])
        return ClusterGraph.from_edges(r, [(i, j) for i in range(r) for j in range(i + 1, r)])
    m = re.fullmatch(r"edges:(\d+):([\d\-,]*)", spec)
    if m:
        pairs = [tuple(int(x) for x in e.split("-")) for e in m.group(2).split(",") if e]
        return ClusterGraph.from_edges(int(m.group(1)), pairs)
    raise ValueError(f"unrecognised cluster graph spec {spec!r}")


def blowup(R: ClusterGraph, N: int) -> PartitionedHost:
    """R(N): every edge of R becomes a complete bipartite K_{N,N}."""
    if N < 1:
        raise ValueError("N must be >= 1")
    full = bitset.full(N)
    return PartitionedHost(R, N, {(i, j): [full] * N for i, j in R.edges})


@dataclass(frozen=True)
class HostRecipe:
    cluster_graph: ClusterGraph
    N: int
    d: float
    delta: float
    low_degree_fraction: float = 0.0
    seed: int = 0

    def validate(self) -> None:
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not 0 < self.d <= 1:
            raise ValueError("d must lie in (0, 1]")
        if not 0 < self.delta <= self.d:
            raise ValueError("delta must lie in (0, d]")
        if not 0 <= self.low_degree_fraction < 1:
            raise ValueError("low_degree_fraction must lie in [0, 1)")


def random_host(recipe: HostRecipe) -> PartitionedHost:
    """Binomial random pairs of density d along E(R).

    The first floor(low_degree_fraction * N) vertices of each class get degree
    exactly ceil(delta * N) into every incident class. Any other vertex whose
    degree fell below ceil(delta * N) is topped up with random edges to
    non-degraded vertices, so every pair meets the delta minimum degree.
    """
    recipe.validate()
    N = recipe.N
    k = floor_frac(as_fraction(recipe.low_degree_fraction) * N)
    target = ceil_frac(as_fraction(recipe.delta) * N)
    if k > target:
        raise ValueError(f"{k} degraded vertices per class cannot all have degree {target}")
    rows: Dict[Tuple[int, int], List[int]] = {}
    for idx, (i, j) in enumerate(recipe.cluster_graph.sorted_edges()):
        rng = _rng(recipe.seed, idx)
        adj = rng.random((N, N)) < recipe.d
        if k:
            # degraded rows of V_i first, then degraded columns of V_j keeping the
            # k x k corner already fixed by the rows
            for a in range(k):
                adj[a, :] = False
                adj[a, rng.choice(N, size=target, replace=False)] = True
            for b in range(k):
                fixed = int(adj[:k, b].sum())
                adj[k:, b] = False
                adj[k + rng.choice(N - k, size=target - fixed, replace=False), b] = True
        _top_up(adj, k, target, rng)
        rows[(i, j)] = [_pack(adj[a]) for a in range(N)]
    return PartitionedHost(recipe.cluster_graph, N, rows)


def _top_up(adj: np.ndarray, k: int, target: int, rng: np.random.Generator) -> None:
    N = adj.shape[0]
    for side in (adj, adj.T):
        for a in range(k, N):
            short = target - int(side[a].sum())
            if short <= 0:
                continue
            free = np.flatnonzero(~side[a, k:]) + k
            side[a, rng.choice(free, size=short, replace=False)] = True


def _validate_cycle(R: ClusterGraph, order: Sequence[int]) -> None:
    r = R.r
    if len(order) < 3 or sorted(order) != list(range(r)):
        raise ValueError("cluster sequence must visit every cluster exactly once, with r >= 3")
    for a, b in zip(order, list(order[1:]) + [order[0]]):
        if not R.has_edge(a, b):
            raise ValueError(f"cluster sequence uses non-edge ({a}, {b}) of R")


def pattern_cycles(R: ClusterGraph, N: int, cycle: Optional[Sequence[int]] = None) -> Pattern:
    """N disjoint r-cycles, each visiting the clusters along ``cycle``
    (default ``0, 1, ..., r-1``). Vertex ``c * N + k`` is the cluster-c vertex
    of cycle k."""
    order = list(range(R.r)) if cycle is None else list(cycle)
    _validate_cycle(R, order)
    edges = []
    for k in range(N):
        for a, b in zip(order, order[1:] + order[:1]):
            edges.append((a * N + k, b * N + k))
    graph = SimpleGraph.from_edges(R.r * N, edges)
    return Pattern(graph, tuple(v // N for v in range(R.r * N)), R)


def pattern_random_bounded(
    R: ClusterGraph,
    N: int,
    delta_max: int,
    fill_fraction: float,
    seed: int,
    edge_target: Optional[int] = None,
    attempts: Optional[int] = None,
    pad: bool = False,
) -> Pattern:
    """Random pattern with Delta(H) <= delta_max.

    ``floor(fill_fraction * N)`` vertices per cluster; candidate edges along
    E(R) are drawn one at a time and kept when both endpoints still have
    spare degree. With ``pad`` the classes are filled up to N with isolated
    vertices (vertex ``c * N + k`` then lies in cluster c).
    """
    if delta_max < 0:
        raise ValueError("delta_max must be >= 0")
    if not 0 < fill_fraction <= 1:
        raise ValueError("fill_fraction must lie in (0, 1]")
    per = floor_frac(as_fraction(fill_fraction) * N)
    r = R.r
    stride = N if pad else per
    n = r * stride
    assignment = tuple(v // stride for v in range(n)) if stride else ()
    if edge_target is None:
        edge_target = delta_max * per * r // 2
    if attempts is None:
        attempts = 20 * per * r
    cluster_edges = R.sorted_edges()
    rng = _rng(seed, 0xB0)
    adj = [0] * n
    deg = [0] * n
    added = 0
    for _ in range(attempts):
        if added >= edge_target or not per or not cluster_edges:
            break
        i, j = cluster_edges[int(rng.integers(len(cluster_edges)))]
        x = i * stride + int(rng.integers(per))
        y = j * stride + int(rng.integers(per))
        if deg[x] < delta_max and deg[y] < delta_max and not adj[x] >> y & 1:
            adj[x] |= 1 << y
            adj[y] |= 1 << x
            deg[x] += 1
            deg[y] += 1
            added += 1
    return Pattern(SimpleGraph(n, tuple(adj)), assignment, R)


def expected_degree_sigma(d: float, N: int) -> float:
    """Standard deviation of the density of a binomial N x N pair."""
    return math.sqrt(d * (1 - d)) / N
