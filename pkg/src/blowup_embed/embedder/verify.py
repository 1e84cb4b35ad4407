"""Independent check that a map is an embedding of H into G respecting psi."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple, Union

from ..graph import PartitionedHost, Pattern

MAX_REPORTED = 10


@dataclass
class VerificationReport:
    missing: List[int] = field(default_factory=list)
    out_of_range: List[Tuple[int, int]] = field(default_factory=list)
    injectivity: List[Tuple[int, List[int]]] = field(default_factory=list)
    cluster: List[Tuple[int, int]] = field(default_factory=list)
    edges: List[Tuple[int, int, int, int]] = field(default_factory=list)
    counts: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.counts.values())

    def lines(self) -> List[str]:
        out = []
        for x in self.missing:
            out.append(f"missing: vertex {x} has no image")
        for x, v in self.out_of_range:
            out.append(f"range: phi({x}) = {v} is not a host vertex")
        for v, xs in self.injectivity:
            out.append(f"injectivity: host vertex {v} is the image of {xs}")
        for x, v in self.cluster:
            out.append(f"cluster-respect: phi({x}) = {v} outside its assigned cluster")
        for x, y, u, v in self.edges:
            out.append(f"edge-preservation: H-edge ({x}, {y}) maps to non-edge ({u}, {v})")
        return out

    def to_dict(self) -> dict:
        return {"ok": self.ok, "counts": dict(self.counts), "violations": self.lines()}


def verify_embedding(
    pattern: Pattern,
    host: PartitionedHost,
    phi: Union[Sequence[int], Mapping[int, int]],
) -> VerificationReport:
    """Check injectivity, phi(x) in psi(x) and edge preservation.

    Reports at most the first ten violations of each kind; ``counts`` has the
    full totals.
    """
    mapping = dict(phi) if isinstance(phi, Mapping) else {x: v for x, v in enumerate(phi) if v is not None}
    rep = VerificationReport()
    counts = defaultdict(int)

    def note(kind, lst, item):
        counts[kind] += 1
        if len(lst) < MAX_REPORTED:
            lst.append(item)

    for x in range(pattern.n):
        if x not in mapping:
            note("missing", rep.missing, x)
    for x, v in sorted(mapping.items()):
        if not 0 <= x < pattern.n or not 0 <= v < host.n:
            note("out_of_range", rep.out_of_range, (x, v))
    valid = {x: v for x, v in mapping.items() if 0 <= x < pattern.n and 0 <= v < host.n}
    preimages: Dict[int, List[int]] = defaultdict(list)
    for x, v in sorted(valid.items()):
        preimages[v].append(x)
    for v, xs in sorted(preimages.items()):
        if len(xs) > 1:
            note("injectivity", rep.injectivity, (v, xs))
    for x, v in sorted(valid.items()):
        if host.cluster_of(v) != pattern.assignment[x]:
            note("cluster", rep.cluster, (x, v))
    for x, y in pattern.graph.edges():
        if x in valid and y in valid and not host.has_edge(valid[x], valid[y]):
            note("edges", rep.edges, (x, y, valid[x], valid[y]))
    for kind in ("missing", "out_of_range", "injectivity", "cluster", "edges"):
        counts.setdefault(kind, 0)
    rep.counts = dict(counts)
    return rep
