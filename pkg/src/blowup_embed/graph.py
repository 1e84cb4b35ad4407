"""Graph representations: simple graphs, cluster graphs, partitioned hosts and patterns.

All adjacency is stored as int bitsets (see :mod:`blowup_embed.bitset`).
Host vertices carry a global index ``cluster * N + offset``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import bitset

Edge = Tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SimpleGraph:
    vertex_count: int
    adjacency: Tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.vertex_count
        if n < 0 or len(self.adjacency) != n:
            raise ValueError("adjacency length must equal vertex_count")
        limit = bitset.full(n)
        for v, row in enumerate(self.adjacency):
            if row & ~limit:
                raise ValueError(f"vertex {v} has neighbors out of range")
            if row >> v & 1:
                raise ValueError(f"self-loop at {v}")
            for u in bitset.iter_bits(row):
                if not self.adjacency[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "SimpleGraph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def n(self) -> int:
        return self.vertex_count

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    @cached_property
    def neighbor_lists(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(bitset.iter_bits(row)) for row in self.adjacency)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.neighbor_lists[v]

    def edges(self) -> List[Edge]:
        """All edges ``(u, v)`` with ``u < v``, sorted lexicographically."""
        out = []
        for u, row in enumerate(self.adjacency):
            out.extend((u, v) for v in bitset.iter_bits(row >> (u + 1) << (u + 1)))
        return out

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adjacency) // 2

    @property
    def max_degree(self) -> int:
        return max((row.bit_count() for row in self.adjacency), default=0)

    @property
    def min_degree(self) -> int:
        return min((row.bit_count() for row in self.adjacency), default=0)


@dataclass(frozen=True)
class ClusterGraph:
    """The reduced graph R on clusters ``0 .. r-1``."""

    r: int
    edges: frozenset

    def __post_init__(self) -> None:
        if self.r < 2:
            raise ValueError("cluster graph needs r >= 2")
        normed = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"loop at cluster {i}")
            if not (0 <= i < self.r and 0 <= j < self.r):
                raise ValueError(f"cluster edge ({i}, {j}) out of range")
            normed.add(_norm(i, j))
        object.__setattr__(self, "edges", frozenset(normed))

    @classmethod
    def from_edges(cls, r: int, edges: Iterable[Edge]) -> "ClusterGraph":
        return cls(r, frozenset(edges))

    def has_edge(self, i: int, j: int) -> bool:
        return _norm(i, j) in self.edges

    def neighbors(self, i: int) -> List[int]:
        return sorted(b if a == i else a for a, b in self.edges if i in (a, b))

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)


class PartitionedHost:
    """Host graph G on classes V_0..V_{r-1} of size N.

    ``rows[(i, j)][a]`` is the bitset (over offsets of V_j) of neighbors of
    vertex ``a`` of V_i. Both directions are stored for every edge of R.
    """

    def __init__(self, cluster_graph: ClusterGraph, N: int, rows: Dict[Edge, Sequence[int]]):
        if N < 1:
            raise ValueError("N must be >= 1")
        self.cluster_graph = cluster_graph
        self.N = N
        self._rows: Dict[Edge, Tuple[int, ...]] = {}
        limit = bitset.full(N)
        for (i, j), block in rows.items():
            if not cluster_graph.has_edge(i, j):
                raise ValueError(f"host edges between clusters {i},{j} which are not adjacent in R")
            if len(block) != N or any(row & ~limit for row in block):
                raise ValueError(f"malformed rows for pair ({i}, {j})")
            self._rows[(i, j)] = tuple(block)
        for i, j in cluster_graph.edges:
            fwd = self._rows.get((i, j))
            bwd = self._rows.get((j, i))
            if fwd is None and bwd is None:
                fwd = bwd = tuple([0] * N)
            elif bwd is None:
                bwd = _transpose(fwd, N)
            elif fwd is None:
                fwd = _transpose(bwd, N)
            elif _transpose(fwd, N) != bwd:
                raise ValueError(f"rows for pair ({i}, {j}) are not symmetric")
            self._rows[(i, j)] = fwd
            self._rows[(j, i)] = bwd
        self._density: Dict[Edge, Fraction] = {}

    @classmethod
    def from_edges(cls, cluster_graph: ClusterGraph, N: int, edges: Iterable[Edge]) -> "PartitionedHost":
        rows: Dict[Edge, List[int]] = {}
        for i, j in cluster_graph.edges:
            rows[(i, j)] = [0] * N
        for u, v in edges:
            (i, a), (j, b) = divmod(u, N), divmod(v, N)
            if (i, j) not in rows and (j, i) not in rows:
                raise ValueError(f"edge ({u}, {v}) joins clusters {i},{j} which are not adjacent in R")
            if (i, j) in rows:
                rows[(i, j)][a] |= 1 << b
            else:
                rows[(j, i)][b] |= 1 << a
        return cls(cluster_graph, N, rows)

    @property
    def r(self) -> int:
        return self.cluster_graph.r

    @property
    def n(self) -> int:
        return self.r * self.N

    def cluster_of(self, v: int) -> int:
        return v // self.N

    def split(self, v: int) -> Tuple[int, int]:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range")
        return divmod(v, self.N)

    def vertex(self, cluster: int, offset: int) -> int:
        return cluster * self.N + offset

    def pair_rows(self, i: int, j: int) -> Tuple[int, ...]:
        try:
            return self._rows[(i, j)]
        except KeyError:
            raise ValueError(f"clusters {i},{j} are not adjacent in R") from None

    def row(self, i: int, offset: int, j: int) -> int:
        """Neighbors in V_j (as offsets) of vertex ``offset`` of V_i."""
        return self._rows[(i, j)][offset]

    def class_bits(self, i: int) -> int:
        """Global bitset of V_i."""
        return bitset.full(self.N) << (i * self.N)

    def neighbors(self, v: int) -> int:
        """Global bitset of N_G(v)."""
        i, a = self.split(v)
        out = 0
        for j in self.cluster_graph.neighbors(i):
            out |= self._rows[(i, j)][a] << (j * self.N)
        return out

    def has_edge(self, u: int, v: int) -> bool:
        (i, a), (j, b) = self.split(u), self.split(v)
        block = self._rows.get((i, j))
        return block is not None and bool(block[a] >> b & 1)

    def degree(self, v: int) -> int:
        return self.neighbors(v).bit_count()

    def pair_edge_count(self, i: int, j: int) -> int:
        return sum(row.bit_count() for row in self.pair_rows(i, j))

    def pair_density(self, i: int, j: int) -> Fraction:
        key = _norm(i, j)
        if key not in self._density:
            self._density[key] = Fraction(self.pair_edge_count(i, j), self.N * self.N)
        return self._density[key]

    def edges(self) -> List[Edge]:
        out = []
        for i, j in self.cluster_graph.sorted_edges():
            for a, row in enumerate(self._rows[(i, j)]):
                u = i * self.N + a
                out.extend((u, j * self.N + b) for b in bitset.iter_bits(row))
        out.sort()
        return out

    @property
    def edge_count(self) -> int:
        return sum(self.pair_edge_count(i, j) for i, j in self.cluster_graph.edges)

    def to_simple_graph(self) -> SimpleGraph:
        return SimpleGraph(self.n, tuple(self.neighbors(v) for v in range(self.n)))

    def without_edge(self, u: int, v: int) -> "PartitionedHost":
        """Copy of the host with edge ``{u, v}`` removed."""
        (i, a), (j, b) = self.split(u), self.split(v)
        rows = {key: list(block) for key, block in self._rows.items() if key[0] < key[1]}
        if i < j:
            rows[(i, j)][a] &= ~(1 << b)
        else:
            rows[(j, i)][b] &= ~(1 << a)
        return PartitionedHost(self.cluster_graph, self.N, rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartitionedHost):
            return NotImplemented
        return (self.cluster_graph, self.N, self._rows) == (other.cluster_graph, other.N, other._rows)

    def __repr__(self) -> str:
        return f"PartitionedHost(r={self.r}, N={self.N}, e={self.edge_count})"


def _transpose(block: Sequence[int], N: int) -> Tuple[int, ...]:
    out = [0] * N
    for a, row in enumerate(block):
        for b in bitset.iter_bits(row):
            out[b] |= 1 << a
    return tuple(out)


@dataclass(frozen=True)
class Pattern:
    """Pattern graph H with an assignment psi: V(H) -> clusters that is a
    homomorphism into R."""

    graph: SimpleGraph
    assignment: Tuple[int, ...]
    cluster_graph: ClusterGraph
    _classes: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.assignment) != self.graph.n:
            raise ValueError("assignment must cover every pattern vertex")
        r = self.cluster_graph.r
        classes: List[List[int]] = [[] for _ in range(r)]
        for x, c in enumerate(self.assignment):
            if not 0 <= c < r:
                raise ValueError(f"vertex {x} assigned to unknown cluster {c}")
            classes[c].append(x)
        for x, y in self.graph.edges():
            if not self.cluster_graph.has_edge(self.assignment[x], self.assignment[y]):
                raise ValueError(
                    f"assignment is not a homomorphism: edge ({x}, {y}) maps to clusters "
                    f"{self.assignment[x]}, {self.assignment[y]}"
                )
        object.__setattr__(self, "_classes", tuple(tuple(c) for c in classes))

    @property
    def n(self) -> int:
        return self.graph.n

    def cluster_vertices(self, i: int) -> Tuple[int, ...]:
        """X_i, in increasing vertex order."""
        return self._classes[i]

    def class_sizes(self) -> List[int]:
        return [len(c) for c in self._classes]

    def check(self, N: int, max_degree: Optional[int] = None) -> None:
        """Raise ValueError unless every |X_i| <= N and Delta(H) <= max_degree."""
        for i, size in enumerate(self.class_sizes()):
            if size > N:
                raise ValueError(f"|X_{i}| = {size} exceeds N = {N}")
        if max_degree is not None and self.graph.max_degree > max_degree:
            raise ValueError(f"Delta(H) = {self.graph.max_degree} exceeds configured {max_degree}")

    def padded(self, N: int) -> "Pattern":
        """Add isolated vertices so that every |X_i| = N."""
        self.check(N)
        extra = [c for c, size in enumerate(self.class_sizes()) for _ in range(N - size)]
        if not extra:
            return self
        n = self.n + len(extra)
        graph = SimpleGraph(n, self.graph.adjacency + (0,) * len(extra))
        return Pattern(graph, self.assignment + tuple(extra), self.cluster_graph)


Graphlike = Union[SimpleGraph, PartitionedHost]


def _neighbor_bits(g: Graphlike, v: int) -> int:
    if isinstance(g, PartitionedHost):
        return g.neighbors(v)
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    return g.adjacency[v]


def degree_into(g: Graphlike, v: int, Y: int) -> int:
    """deg(v, Y): number of neighbors of ``v`` inside the vertex bitset ``Y``."""
    return (_neighbor_bits(g, v) & Y).bit_count()


def edges_between(g: Graphlike, X: int, Y: int) -> int:
    return sum(degree_into(g, x, Y) for x in bitset.iter_bits(X))


def density(g: Graphlike, X: int, Y: int) -> Fraction:
    """d(X, Y) = e(X, Y) / (|X| |Y|) for disjoint nonempty vertex bitsets."""
    if not X or not Y:
        raise ValueError("density needs nonempty X and Y")
    if X & Y:
        raise ValueError("density needs disjoint X and Y")
    return Fraction(edges_between(g, X, Y), X.bit_count() * Y.bit_count())


def bfs_distance(g: SimpleGraph, u: int, v: int) -> Optional[int]:
    """Shortest-path length from u to v, or None when unreachable."""
    n = g.n
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError("vertex out of range")
    if u == v:
        return 0
    seen = 1 << u
    frontier = 1 << u
    dist = 0
    while frontier:
        dist += 1
        nxt = 0
        for w in bitset.iter_bits(frontier):
            nxt |= g.adjacency[w]
        nxt &= ~seen
        if nxt >> v & 1:
            return dist
        seen |= nxt
        frontier = nxt
    return None


def ball(g: SimpleGraph, v: int, radius: int) -> int:
    """Bitset of vertices within distance ``radius`` of ``v``."""
    seen = frontier = 1 << v
    for _ in range(radius):
        nxt = 0
        for w in bitset.iter_bits(frontier):
            nxt |= g.adjacency[w]
        frontier = nxt & ~seen
        if not frontier:
            break
        seen |= frontier
    return seen


def bfs_layers(g: SimpleGraph, source: int) -> List[Optional[int]]:
    """Distances from ``source`` to every vertex (None for unreachable)."""
    dist: List[Optional[int]] = [None] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        w = queue.popleft()
        for u in g.neighbors(w):
            if dist[u] is None:
                dist[u] = dist[w] + 1
                queue.append(u)
    return dist
