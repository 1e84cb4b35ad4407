"""Mutable state of one embedding run.

Host vertices inside candidate sets are offsets within the relevant class,
so ``C[y]`` and ``H[y]`` are N-bit ints over the class psi(y).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from .. import bitset
from ..graph import PartitionedHost, Pattern
from ..util import ceil_frac, floor_frac
from .cascade import ParameterCascade

PHASE1_STUCK = "phase1-stuck"
PHASE2_HALL_FAILURE = "phase2-hall-failure"
PREPROCESSING_FAILURE = "preprocessing-failure"
SUCCESS = "success"


class EmbeddingFailure(Exception):
    """The algorithm could not proceed; ``outcome`` names the failure mode."""

    def __init__(self, outcome: str, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.outcome = outcome
        self.details = details or {}


class InternalError(RuntimeError):
    """A state invariant broke; this is a bug, not an input condition."""


@dataclass
class Thresholds:
    """Integer forms of every threshold the algorithm compares against.

    ``lo[(i, j)][s]`` / ``hi[(i, j)][s]`` bound deg(v, S) for v in V_i and
    S in V_j with |S| = s: ceil((d_ij - eps) s) <= deg <= floor((d_ij + eps) s).
    With ``small_set_exemption`` sets of size <= eps N are unconstrained.
    """

    eps: Fraction
    eps1: Fraction
    eps2: Fraction
    d1: Fraction
    d2: Fraction
    d3: Fraction
    delta: Fraction
    Delta: int
    densities: Dict[Tuple[int, int], Fraction]
    lo: Dict[Tuple[int, int], List[int]]
    hi: Dict[Tuple[int, int], List[int]]
    buffer_quota: int
    T1: int
    exceptional_H: int

    @classmethod
    def build(
        cls,
        host: PartitionedHost,
        cascade: ParameterCascade,
        use_measured_density: bool = True,
        small_set_exemption: bool = True,
    ) -> "Thresholds":
        N, n = host.N, host.n
        eps = cascade.value("eps")
        d1 = cascade.value("d1")
        d2 = cascade.value("d2")
        densities: Dict[Tuple[int, int], Fraction] = {}
        lo: Dict[Tuple[int, int], List[int]] = {}
        hi: Dict[Tuple[int, int], List[int]] = {}
        for i, j in host.cluster_graph.edges:
            dij = host.pair_density(i, j) if use_measured_density else cascade.d
            low, high = dij - eps, dij + eps
            lows = [max(0, ceil_frac(low * s)) for s in range(N + 1)]
            highs = [floor_frac(high * s) for s in range(N + 1)]
            if small_set_exemption:
                # eps-regularity says nothing about sets of size <= eps N
                for s in range(min(N, floor_frac(eps * N)) + 1):
                    lows[s], highs[s] = 0, s
            for key in ((i, j), (j, i)):
                densities[key] = dij
                lo[key] = lows
                hi[key] = highs
        return cls(
            eps=eps,
            eps1=cascade.value("eps1"),
            eps2=cascade.value("eps2"),
            d1=d1,
            d2=d2,
            d3=cascade.value("d3"),
            delta=cascade.delta,
            Delta=cascade.Delta,
            densities=densities,
            lo=lo,
            hi=hi,
            buffer_quota=ceil_frac(d1 * N),
            T1=max(1, ceil_frac(d2 * n)),
            exceptional_H=floor_frac(d1 * d1 * n),
        )


@dataclass
class Diagnostics:
    T0: int = 0
    T1: int = 0
    T: int = 0
    buffer_sizes: List[int] = field(default_factory=list)
    E1_sizes: List[int] = field(default_factory=list)
    E2_sizes: List[int] = field(default_factory=list)
    EH1: int = 0
    EH2: int = 0
    E1_bound_ok: Optional[bool] = None
    E2_bound_ok: Optional[bool] = None
    min_H_series: List[int] = field(default_factory=list)
    min_H_set: Optional[int] = None
    bad_growth: List[int] = field(default_factory=list)
    bad_total: int = 0
    case2_events: List[dict] = field(default_factory=list)
    step4_events: List[dict] = field(default_factory=list)
    early_exceptional: int = 0
    buffers_out_of_order: int = 0
    phase2: List[dict] = field(default_factory=list)
    min_H_above_d2N: Optional[bool] = None
    uncovered_ok: Optional[bool] = None
    invariant_checks: int = 0
    invariant_violations: List[str] = field(default_factory=list)
    failure: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["bad_growth_max"] = max(self.bad_growth, default=0)
        return out


class EmbeddingState:
    """t, the order S, phi, Z_t, C_{t,y}, H_{t,y}, Bad_t, buffers and
    exceptional sets for one run."""

    def __init__(
        self,
        pattern: Pattern,
        host: PartitionedHost,
        cascade: ParameterCascade,
        thresholds: Thresholds,
        rng: random.Random,
    ):
        self.pattern = pattern
        self.host = host
        self.cascade = cascade
        self.th = thresholds
        self.rng = rng
        self.N = host.N
        self.r = host.r
        self.n = pattern.n
        self.psi = pattern.assignment
        self.t = 0
        self.order: List[int] = list(range(self.n))
        self.phi: List[Optional[int]] = [None] * self.n
        self.embedded_bits = 0
        self.Z = [0] * self.r
        full = bitset.full(self.N)
        self.C = [full] * self.n
        self.H = [full] * self.n
        self.bad: List[Set[int]] = [set() for _ in range(self.n)]
        self.bad_pairs = 0
        self.unembedded: List[Dict[int, None]] = [dict.fromkeys(pattern.cluster_vertices(i)) for i in range(self.r)]
        self.buffers: List[List[int]] = [[] for _ in range(self.r)]
        self.is_buffer = [False] * self.n
        self.nonbuffers_left = self.n
        self.T0 = 0
        self.T1 = thresholds.T1
        self.T: Optional[int] = None
        self.E1: List[List[int]] = [[] for _ in range(self.r)]
        self.E2: List[List[int]] = [[] for _ in range(self.r)]
        self.EH1: Set[int] = set()
        self.EH2: Set[int] = set()
        self.pools: Dict[Tuple[int, int], List[int]] = {}
        self.e2_done = False
        self.diag = Diagnostics(T1=self.T1)

    # -- queries ---------------------------------------------------------

    def is_embedded(self, x: int) -> bool:
        return bool(self.embedded_bits >> x & 1)

    def unembedded_neighbors(self, x: int) -> List[int]:
        return [y for y in self.pattern.graph.neighbors(x) if not self.embedded_bits >> y & 1]

    def remaining(self) -> List[int]:
        return self.order[self.t :]

    def pending_exceptional(self) -> int:
        """Number of E_H vertices waiting at the front of the remaining order."""
        k = self.t
        while k < self.n and self.order[k] in self.EH1 | self.EH2 and not self.is_embedded(self.order[k]):
            k += 1
        return k - self.t

    def bring_forward(self, front: List[int], after_pending: bool = False) -> None:
        """Move ``front`` to the head of the remaining order, others keep their
        relative order."""
        if not front:
            return
        head = self.t + (self.pending_exceptional() if after_pending else 0)
        moving = set(front)
        rest = [x for x in self.order[head:] if x not in moving]
        self.order[head:] = [x for x in front if x not in self.order[self.t : head]] + rest

    def set_buffers(self, buffers: List[List[int]]) -> None:
        self.buffers = [list(b) for b in buffers]
        self.is_buffer = [False] * self.n
        for b in buffers:
            for x in b:
                self.is_buffer[x] = True
        self.nonbuffers_left = sum(1 for x in range(self.n) if not self.is_buffer[x] and not self.is_embedded(x))
        self.diag.buffer_sizes = [len(b) for b in buffers]

    # -- updates ---------------------------------------------------------

    def apply_image(self, x: int, a: int) -> None:
        """Record phi(x) = offset ``a`` of psi(x), shrink C and H."""
        i = self.psi[x]
        bit = 1 << a
        if self.Z[i] & bit:
            raise InternalError(f"host vertex {i * self.N + a} already occupied")
        self.phi[x] = i * self.N + a
        self.embedded_bits |= 1 << x
        del self.unembedded[i][x]
        self.Z[i] |= bit
        if not self.is_buffer[x]:
            self.nonbuffers_left -= 1
        nbrs = self.unembedded_neighbors(x)
        for y in nbrs:
            j = self.psi[y]
            self.C[y] &= self.host.row(i, a, j)
        keep = ~bit
        for y in self.unembedded[i]:
            self.H[y] &= keep
        for y in nbrs:
            self.H[y] = self.C[y] & ~self.Z[self.psi[y]]

    def add_bad(self, pairs) -> int:
        added = 0
        for y, y2 in pairs:
            if y2 not in self.bad[y]:
                self.bad[y].add(y2)
                self.bad[y2].add(y)
                added += 1
        self.bad_pairs += added
        return added

    # -- invariant checks ------------------------------------------------

    def recompute_C(self, y: int) -> int:
        """C_{t,y} from scratch: psi(y) cut by the neighborhoods of the images
        of y's embedded neighbors."""
        c = bitset.full(self.N)
        j = self.psi[y]
        for x in self.pattern.graph.neighbors(y):
            if self.is_embedded(x):
                i, a = divmod(self.phi[x], self.N)
                c &= self.host.row(i, a, j)
        return c

    def check_invariants(self, previous_C: Optional[List[int]] = None) -> List[str]:
        problems = []
        for i in range(self.r):
            for y in self.unembedded[i]:
                c = self.recompute_C(y)
                if self.C[y] != c:
                    problems.append(f"t={self.t}: C[{y}] differs from recomputation")
                if self.H[y] != self.C[y] & ~self.Z[i]:
                    problems.append(f"t={self.t}: H[{y}] != C[{y}] minus Z")
                if previous_C is not None and self.C[y] & ~previous_C[y]:
                    problems.append(f"t={self.t}: C[{y}] grew")
        embedded = self.embedded_bits.bit_count()
        if sum(z.bit_count() for z in self.Z) != embedded:
            problems.append(f"t={self.t}: |Z| != number of embedded vertices")
        if self.T is None and embedded != self.t:
            problems.append(f"t={self.t}: {embedded} vertices embedded in Phase 1")
        images = [v for v in self.phi if v is not None]
        if len(set(images)) != len(images):
            problems.append(f"t={self.t}: phi not injective")
        for x, v in enumerate(self.phi):
            if v is not None and v // self.N != self.psi[x]:
                problems.append(f"t={self.t}: phi({x}) outside its cluster")
        return problems
