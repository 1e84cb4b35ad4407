"""Plain-text graph files.

Line-oriented, ``#`` starts a comment::

    graph <n>            # SimpleGraph
    host <r> <N>         # PartitionedHost
    pattern <n> <r>      # Pattern
    re i j               # cluster-graph edge (host, pattern); when absent,
                         # R is taken to be the pairs that carry edges
    e u v                # edge, global vertex indices
    psi v c              # pattern assignment
    map x v              # embedding line (map files only)

Writers emit edges sorted lexicographically so output is byte-stable.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

from .graph import ClusterGraph, PartitionedHost, Pattern, SimpleGraph

PathLike = Union[str, Path]


class GraphFormatError(ValueError):
    pass


def _tokens(text: str) -> List[Tuple[int, List[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _ints(lineno: int, parts: List[str], count: int) -> List[int]:
    if len(parts) != count + 1:
        raise GraphFormatError(f"line {lineno}: expected {count} fields after {parts[0]!r}")
    try:
        return [int(p) for p in parts[1:]]
    except ValueError:
        raise GraphFormatError(f"line {lineno}: non-integer field in {' '.join(parts)!r}") from None


def dumps_graph(g: SimpleGraph) -> str:
    lines = [f"graph {g.n}"]
    lines += [f"e {u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def dumps_host(host: PartitionedHost) -> str:
    lines = [f"host {host.r} {host.N}"]
    lines += [f"re {i} {j}" for i, j in host.cluster_graph.sorted_edges()]
    lines += [f"e {u} {v}" for u, v in host.edges()]
    return "\n".join(lines) + "\n"


def dumps_pattern(p: Pattern) -> str:
    lines = [f"pattern {p.n} {p.cluster_graph.r}"]
    lines += [f"re {i} {j}" for i, j in p.cluster_graph.sorted_edges()]
    lines += [f"e {u} {v}" for u, v in p.graph.edges()]
    lines += [f"psi {x} {c}" for x, c in enumerate(p.assignment)]
    return "\n".join(lines) + "\n"


def dumps_map(phi: Iterable[int]) -> str:
    return "".join(f"map {x} {v}\n" for x, v in enumerate(phi))


def loads(text: str) -> Union[SimpleGraph, PartitionedHost, Pattern]:
    toks = _tokens(text)
    if not toks:
        raise GraphFormatError("empty graph file")
    lineno, head = toks[0]
    kind = head[0]
    edges: List[Tuple[int, int]] = []
    cluster_edges: List[Tuple[int, int]] = []
    psi: Dict[int, int] = {}
    for ln, parts in toks[1:]:
        tag = parts[0]
        if tag == "e":
            u, v = _ints(ln, parts, 2)
            edges.append((u, v))
        elif tag == "re" and kind in ("host", "pattern"):
            i, j = _ints(ln, parts, 2)
            cluster_edges.append((i, j))
        elif tag == "psi" and kind == "pattern":
            x, c = _ints(ln, parts, 2)
            if x in psi:
                raise GraphFormatError(f"line {ln}: duplicate psi for vertex {x}")
            psi[x] = c
        else:
            raise GraphFormatError(f"line {ln}: unexpected record {tag!r} in {kind} file")
    try:
        if kind == "graph":
            (n,) = _ints(lineno, head, 1)
            return SimpleGraph.from_edges(n, edges)
        if kind == "host":
            r, N = _ints(lineno, head, 2)
            if not cluster_edges:
                cluster_edges = [(u // N, v // N) for u, v in edges]
            return PartitionedHost.from_edges(ClusterGraph.from_edges(r, cluster_edges), N, edges)
        if kind == "pattern":
            n, r = _ints(lineno, head, 2)
            if sorted(psi) != list(range(n)):
                raise GraphFormatError("pattern file must give psi for every vertex 0..n-1")
            if not cluster_edges:
                cluster_edges = [(psi[u], psi[v]) for u, v in edges if u in psi and v in psi]
            return Pattern(
                SimpleGraph.from_edges(n, edges),
                tuple(psi[x] for x in range(n)),
                ClusterGraph.from_edges(r, cluster_edges),
            )
    except GraphFormatError:
        raise
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None
    raise GraphFormatError(f"line {lineno}: unknown header {kind!r}")


def loads_map(text: str) -> Dict[int, int]:
    phi: Dict[int, int] = {}
    for ln, parts in _tokens(text):
        if parts[0] != "map":
            raise GraphFormatError(f"line {ln}: expected 'map x v'")
        x, v = _ints(ln, parts, 2)
        if x in phi:
            raise GraphFormatError(f"line {ln}: vertex {x} mapped twice")
        phi[x] = v
    return phi


def read(path: PathLike):
    return loads(Path(path).read_text())


def read_map(path: PathLike) -> Dict[int, int]:
    return loads_map(Path(path).read_text())


def write(path: PathLike, obj) -> None:
    if isinstance(obj, PartitionedHost):
        text = dumps_host(obj)
    elif isinstance(obj, Pattern):
        text = dumps_pattern(obj)
    elif isinstance(obj, SimpleGraph):
        text = dumps_graph(obj)
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    Path(path).write_text(text)
