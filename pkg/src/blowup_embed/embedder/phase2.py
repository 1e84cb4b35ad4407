"""Phase 2: place the remaining (buffer) vertices by a system of distinct
representatives of their H-sets, one matching instance per cluster."""

from __future__ import annotations

from itertools import combinations
from typing import List, Optional

from .. import bitset
from ..matching import BipartiteInstance, perfect_or_violator
from ..util import ceil_frac
from .state import PHASE2_HALL_FAILURE, EmbeddingFailure, EmbeddingState, InternalError

KONIG2_EXHAUSTIVE_LIMIT = 12


def konig_conditions(inst: BipartiteInstance, d3) -> dict:
    """Evaluate the three sufficient Hall conditions on a square instance.

    (1) every |H_x| > d3 M; (2) every S with |S| >= d3 M covers >= (1 - d3) M,
    checked exhaustively only for M <= 12; (3) every S with |S| >= (1 - d3) M
    covers all of Y, i.e. no right vertex is avoided by that many sets.
    """
    M = inst.left_count
    sizes = [row.bit_count() for row in inst.edges]
    k1 = all(s > d3 * M for s in sizes)
    big = ceil_frac((1 - d3) * M)
    degree = [0] * M
    for row in inst.edges:
        for b in bitset.iter_bits(row):
            degree[b] += 1
    k3 = all(M - deg < big for deg in degree)
    k2: Optional[bool] = None
    if M <= KONIG2_EXHAUSTIVE_LIMIT:
        k2 = True
        start = ceil_frac(d3 * M)
        for size in range(max(start, 1), M + 1):
            for S in combinations(range(M), size):
                if inst.neighborhood(S).bit_count() < (1 - d3) * M:
                    k2 = False
                    break
            if not k2:
                break
    return {"konig1": k1, "konig2": k2, "konig3": k3, "min_H": min(sizes, default=0)}


def build_instance(state: EmbeddingState, i: int):
    """(left vertices, right offsets, instance) for cluster i at time T."""
    left = list(state.unembedded[i])
    right = [a for a in range(state.N) if not state.Z[i] >> a & 1]
    if len(left) != len(right):
        raise InternalError(f"cluster {i}: {len(left)} unembedded vertices but {len(right)} free hosts")
    inst = BipartiteInstance(len(left), len(right), tuple(bitset.compress(state.H[y], right) for y in left))
    return left, right, inst


def run_phase2(state: EmbeddingState) -> EmbeddingState:
    """Extend phi to every vertex left after Phase 1 or raise a Hall failure."""
    if state.T is None:
        raise InternalError("Phase 2 started before Phase 1 finished")
    for i in range(state.r):
        left, right, inst = build_instance(state, i)
        stats = {"cluster": i, "M": len(left)}
        if left:
            stats.update(konig_conditions(inst, state.th.d3))
        outcome = perfect_or_violator(inst)
        state.diag.phase2.append(stats)
        if not outcome.perfect:
            violator = [left[k] for k in outcome.violator]
            raise EmbeddingFailure(
                PHASE2_HALL_FAILURE,
                f"cluster {i}: {len(violator)} vertices share only "
                f"{inst.neighborhood(outcome.violator).bit_count()} free hosts",
                {"cluster": i, "violator": violator, "matched": len(outcome.matching), "M": len(left)},
            )
        for u, v in outcome.matching:
            state.apply_image(left[u], right[v])
    return state


def phase2_images(state: EmbeddingState) -> List[int]:
    """Phase-2 images (global ids), for tests."""
    return [state.phi[x] for x in state.order[state.T :]]
