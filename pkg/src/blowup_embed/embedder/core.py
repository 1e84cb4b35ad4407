"""Top-level embedding run: preprocessing, Phase 1, Phase 2, verification."""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from ..graph import PartitionedHost, Pattern, ball
from .cascade import PRACTICAL_DEFAULTS, ParameterCascade, compute_cascade
from .phase1 import run_phase1
from .phase2 import run_phase2
from .preprocess import detect_exceptional_G1, initial_order, select_buffers
from .state import SUCCESS, EmbeddingFailure, EmbeddingState, InternalError, Thresholds
from .verify import verify_embedding

PRACTICAL = "practical"
PAPER = "paper"


@dataclass
class EmbedConfig:
    """Knobs for one run.

    ``d``, ``delta`` and ``Delta`` default to the host's smallest pair density,
    its smallest relative degree, and Delta(H). In practical mode the derived
    cascade values come from PRACTICAL_DEFAULTS updated with ``overrides``;
    in paper mode they are the exact powers of the base unless overridden.
    """

    mode: str = PRACTICAL
    seed: int = 0
    d: Optional[float] = None
    delta: Optional[float] = None
    Delta: Optional[int] = None
    overrides: Dict[str, float] = field(default_factory=dict)
    strict: bool = True
    exhaustive_selection: bool = False
    measured_density: bool = True
    small_set_exemption: bool = True
    proportion_includes_self: bool = False
    invariant_check_rate: float = 0.0
    verbosity: int = 1

    def effective_overrides(self) -> Dict[str, float]:
        if self.mode == PRACTICAL:
            return {**PRACTICAL_DEFAULTS, **self.overrides}
        if self.mode == PAPER:
            return dict(self.overrides)
        raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class EmbeddingReport:
    outcome: str
    phi: Optional[List[int]]
    cascade: dict
    diagnostics: dict
    timings: Dict[str, float]
    verification: Optional[dict] = None
    message: str = ""
    config: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.outcome == SUCCESS

    def map_lines(self) -> List[str]:
        return [f"map {x} {v}" for x, v in enumerate(self.phi or [])]

    def to_dict(self, timings: bool = True) -> dict:
        out = asdict(self)
        out["map"] = self.map_lines()
        del out["phi"]
        if not timings:
            del out["timings"]
        return out

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=1, sort_keys=True, default=_jsonable)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def host_parameters(host: PartitionedHost) -> tuple:
    """(smallest pair density, smallest relative degree) over all pairs."""
    dens, degs = [], []
    for i, j in host.cluster_graph.edges:
        dens.append(host.pair_density(i, j))
        for a, b in ((i, j), (j, i)):
            degs.append(min(row.bit_count() for row in host.pair_rows(a, b)))
    d = min(dens, default=Fraction(1))
    delta = Fraction(max(min(degs, default=host.N), 1), host.N)
    return d, min(delta, d)


def prepare(pattern: Pattern, host: PartitionedHost, config: EmbedConfig):
    """Validate inputs and build (pattern, cascade, thresholds)."""
    if pattern.cluster_graph != host.cluster_graph:
        raise ValueError("pattern and host use different cluster graphs")
    Delta = config.Delta if config.Delta is not None else max(1, pattern.graph.max_degree)
    if config.strict:
        pattern.check(host.N, Delta)
        sizes = pattern.class_sizes()
        if any(s != host.N for s in sizes):
            raise ValueError(f"strict mode needs |X_i| = N = {host.N}, got {sizes}")
    else:
        pattern.check(host.N, Delta)
        pattern = pattern.padded(host.N)
    d_host, delta_host = host_parameters(host)
    d = config.d if config.d is not None else d_host
    delta = config.delta if config.delta is not None else delta_host
    cascade = compute_cascade(d, delta, Delta, host.r, config.effective_overrides())
    th = Thresholds.build(host, cascade, config.measured_density, config.small_set_exemption)
    return pattern, cascade, th


def _buffer_violations(state: EmbeddingState) -> List[str]:
    flat = [b for bs in state.buffers for b in bs]
    bits = 0
    for b in flat:
        bits |= 1 << b
    out = []
    for b in flat:
        close = ball(state.pattern.graph, b, 2) & bits & ~(1 << b)
        if close:
            out.append(f"buffer {b} within distance 2 of another buffer")
    return out


def start_state(pattern: Pattern, host: PartitionedHost, cascade: ParameterCascade, th: Thresholds, seed: int) -> EmbeddingState:
    """Buffers, order S and E^1 handling; the state is ready for Phase 1."""
    rng = random.Random(seed)
    state = EmbeddingState(pattern, host, cascade, th, rng)
    state.set_buffers(select_buffers(pattern, cascade, rng, host.N, th.buffer_quota))
    state.order, state.T0 = initial_order(pattern, state.buffers, rng)
    detect_exceptional_G1(state)
    state.diag.T0 = state.T0
    return state


def embed(pattern: Pattern, host: PartitionedHost, config: Optional[EmbedConfig] = None) -> EmbeddingReport:
    """Run the two-phase embedding and verify the result.

    Algorithmic failures come back as the report outcome; invalid inputs
    raise ValueError.
    """
    config = config or EmbedConfig()
    timings: Dict[str, float] = {}
    clock = time.perf_counter()
    pattern, cascade, th = prepare(pattern, host, config)
    state: Optional[EmbeddingState] = None
    outcome, message = SUCCESS, ""
    check_rng = random.Random(f"{config.seed}:invariants")
    try:
        state = start_state(pattern, host, cascade, th, config.seed)
        if config.invariant_check_rate > 0:
            problems = _buffer_violations(state)
            if problems:
                raise InternalError("; ".join(problems))
        timings["preprocess_ms"] = (time.perf_counter() - clock) * 1e3
        clock = time.perf_counter()
        run_phase1(
            state,
            exhaustive=config.exhaustive_selection,
            include_self=config.proportion_includes_self,
            check_rate=config.invariant_check_rate,
            check_rng=check_rng,
        )
        timings["phase1_ms"] = (time.perf_counter() - clock) * 1e3
        clock = time.perf_counter()
        run_phase2(state)
        timings["phase2_ms"] = (time.perf_counter() - clock) * 1e3
    except EmbeddingFailure as failure:
        outcome, message = failure.outcome, str(failure)
        if state is None:
            state = EmbeddingState(pattern, host, cascade, th, random.Random(config.seed))
        state.diag.failure = {"outcome": failure.outcome, "message": message, **failure.details}
    verification = None
    phi = None
    if outcome == SUCCESS:
        phi = list(state.phi)
        report = verify_embedding(pattern, host, phi)
        verification = report.to_dict()
        if not report.ok:
            raise InternalError("algorithm reported success but verification failed: " + "; ".join(report.lines()))
    return EmbeddingReport(
        outcome=outcome,
        phi=phi,
        cascade=cascade.to_dict(),
        diagnostics=state.diag.to_dict(),
        timings=timings,
        verification=verification,
        message=message,
        config=asdict(config),
    )
