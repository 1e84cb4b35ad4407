"""Phase 1: embed the non-buffer vertices one by one.

Case 1 accepts an image v for x_t when, for every unembedded neighbor y of
x_t in class j and with D(S) meaning (d_ij +- eps)|S|:

(1) deg(v, H_y) lies in D(H_y);
(2) deg(v, C_y) lies in D(C_y);
(3) deg(v, C_y & C_y') lies in D(C_y & C_y') for all but an eps1 share of
    the unembedded y' in X_j not already Bad with y; the failures become
    Bad pairs.
"""

from __future__ import annotations

import random
from collections import Counter
from typing import Dict, List, Optional, Tuple

from .. import bitset
from ..graph import ball
from ..util import floor_frac
from .preprocess import _far_vertices
from .state import PHASE1_STUCK, EmbeddingFailure, EmbeddingState, InternalError

BadPairs = List[Tuple[int, int]]


class _NeighborCheck:
    """Everything condition (1)-(3) needs for one unembedded neighbor y of
    x_t, independent of the candidate image v."""

    __slots__ = ("y", "j", "H", "H_lo", "H_hi", "C", "C_lo", "C_hi", "groups", "allowed")

    def __init__(self, state: EmbeddingState, i: int, y: int, include_self: bool):
        th = state.th
        j = state.psi[y]
        lo, hi = th.lo[(i, j)], th.hi[(i, j)]
        self.y, self.j = y, j
        self.H = state.H[y]
        s = self.H.bit_count()
        self.H_lo, self.H_hi = lo[s], hi[s]
        self.C = state.C[y]
        s = self.C.bit_count()
        self.C_lo, self.C_hi = lo[s], hi[s]
        # y' with equal C sets share the intersection, so group them
        by_set: Dict[int, List[int]] = {}
        bad = state.bad[y]
        eligible = 0
        for y2 in state.unembedded[j]:
            if (y2 == y and not include_self) or y2 in bad:
                continue
            by_set.setdefault(state.C[y2], []).append(y2)
            eligible += 1
        self.groups = []
        for c2, members in by_set.items():
            inter = self.C & c2
            s = inter.bit_count()
            self.groups.append((inter, lo[s], hi[s], members))
        # condition (3) must hold for a (1 - eps1) share, i.e. fail for <= eps1 * eligible
        self.allowed = floor_frac(th.eps1 * eligible)


def _evaluate(row_of, checks: List[_NeighborCheck], rejections: Counter) -> Optional[BadPairs]:
    """Bad pairs created by choosing this candidate, or None if it fails (1)-(3)."""
    new_bad: BadPairs = []
    for chk in checks:
        row = row_of(chk.j)
        k = (row & chk.H).bit_count()
        if k < chk.H_lo or k > chk.H_hi:
            rejections["1"] += 1
            return None
        k = (row & chk.C).bit_count()
        if k < chk.C_lo or k > chk.C_hi:
            rejections["2"] += 1
            return None
        fails = 0
        failed = []
        for inter, lo, hi, members in chk.groups:
            k = (row & inter).bit_count()
            if k < lo or k > hi:
                fails += len(members)
                if fails > chk.allowed:
                    rejections["3"] += 1
                    return None
                failed.append(members)
        y = chk.y
        new_bad.extend((y, y2) for members in failed for y2 in members if y2 != y)
    return new_bad


def select_image_case1(
    state: EmbeddingState,
    x: int,
    exhaustive: bool = False,
    include_self: bool = False,
) -> Tuple[int, BadPairs]:
    """Pick v in H_{t-1,x} satisfying (1)-(3) for every unembedded neighbor,
    uniformly at random among valid candidates.

    Candidates are tried in a random order and the first valid one is taken,
    which is the same distribution as scoring all of them (``exhaustive``).
    Returns the class offset of v and the pairs to add to Bad.
    """
    i = state.psi[x]
    cand = state.H[x]
    if not cand:
        raise EmbeddingFailure(PHASE1_STUCK, f"t={state.t + 1}: H-set of vertex {x} is empty", {"x": x})
    checks = [_NeighborCheck(state, i, y, include_self) for y in state.unembedded_neighbors(x)]
    candidates = bitset.to_list(cand)
    if not checks:
        return state.rng.choice(candidates), []
    rows = state.host.pair_rows
    rejections: Counter = Counter()
    state.rng.shuffle(candidates)
    valid = []
    for a in candidates:
        new_bad = _evaluate(lambda j: rows(i, j)[a], checks, rejections)
        if new_bad is None:
            continue
        if not exhaustive:
            return a, new_bad
        valid.append((a, new_bad))
    if valid:
        return state.rng.choice(valid)
    raise EmbeddingFailure(
        PHASE1_STUCK,
        f"t={state.t + 1}: no image for vertex {x} satisfies conditions (1)-(3)",
        {"x": x, "candidates": len(candidates), "rejections": dict(sorted(rejections.items()))},
    )


def select_image_case2(state: EmbeddingState, x: int) -> int:
    """Image for an exceptional H-vertex: the first unused vertex of its
    exceptional pool E_i^1 or E_i^2."""
    level = 1 if x in state.EH1 else 2
    i = state.psi[x]
    pool = state.pools.get((level, i), [])
    while pool:
        a = pool.pop(0)
        if not state.Z[i] >> a & 1:
            break
    else:
        raise InternalError(f"exceptional pool E_{i}^{level} exhausted at vertex {x}")
    if not state.H[x] >> a & 1:
        raise InternalError(f"exceptional image {a} not available to vertex {x}")
    return a


def detect_exceptional_G2(state: EmbeddingState) -> None:
    """E_i^2: uncovered v in V_i lying in fewer than d2 |B_i| of the buffer
    candidate sets. Brings far-apart untouched H-vertices forward to use them."""
    th, N = state.th, state.N
    state.e2_done = True
    for i in range(state.r):
        live = [b for b in state.buffers[i] if not state.is_embedded(b)]
        counts = [0] * N
        for b in live:
            for a in bitset.iter_bits(state.C[b]):
                counts[a] += 1
        bound = th.d2 * len(live)
        free = ~state.Z[i]
        state.E2[i] = [a for a in range(N) if free >> a & 1 and counts[a] < bound]
    need = [len(e) for e in state.E2]
    state.diag.E2_sizes = need
    state.diag.E2_bound_ok = all(k <= th.eps2 * N for k in need)
    if not any(need):
        return
    full = bitset.full(N)
    g = state.pattern.graph
    blocked = 0
    for x in range(state.n):
        if state.is_embedded(x):
            blocked |= ball(g, x, 2)
    candidates = [
        x
        for x in state.remaining()
        if not state.is_buffer[x] and x not in state.EH1 and state.C[x] == full
    ]
    chosen, short = _far_vertices(state, need, blocked, candidates)
    if any(short):
        raise EmbeddingFailure(
            PHASE1_STUCK,
            f"t={state.t}: not enough untouched far-apart H-vertices for E^2 (missing {short})",
            {"E2_sizes": need, "missing": short},
        )
    state.EH2 = set(chosen)
    state.diag.EH2 = len(chosen)
    for i in range(state.r):
        state.pools[(2, i)] = list(state.E2[i])
    state.bring_forward(chosen)


def detect_exceptional_H(state: EmbeddingState) -> List[int]:
    """Bring forward every unembedded y with |H_{t,y}| <= d1^2 n (buffers too),
    behind any exceptional vertices already queued."""
    limit = state.th.exceptional_H
    found = [y for y in state.remaining() if state.H[y].bit_count() <= limit]
    if found:
        state.bring_forward(found, after_pending=True)
        state.diag.step4_events.append(
            {"t": state.t, "moved": len(found), "buffers": sum(state.is_buffer[y] for y in found)}
        )
        if state.t <= 2 * state.T0:
            state.diag.early_exceptional += 1
    return found


def run_phase1(
    state: EmbeddingState,
    exhaustive: bool = False,
    include_self: bool = False,
    check_rate: float = 0.0,
    check_rng: Optional[random.Random] = None,
) -> EmbeddingState:
    """Steps 1-5 until every non-buffer vertex is embedded; sets state.T."""
    th, diag = state.th, state.diag
    growth_cap = th.Delta * th.eps1 * state.N
    if state.T0 == 0 and not state.e2_done:
        detect_exceptional_G2(state)
    while state.nonbuffers_left > 0:
        if state.t >= state.n:
            raise InternalError("order exhausted with non-buffer vertices left")
        x = state.order[state.t]
        exceptional = x in state.EH1 or x in state.EH2
        if exceptional:
            a = select_image_case2(state, x)
            new_bad: BadPairs = []
        else:
            a, new_bad = select_image_case1(state, x, exhaustive, include_self)
        if state.is_buffer[x] and state.unembedded_neighbors(x):
            diag.buffers_out_of_order += 1
        checking = check_rate > 0 and check_rng is not None and check_rng.random() < check_rate
        previous_C = list(state.C) if checking else None
        state.apply_image(x, a)
        state.t += 1
        added = state.add_bad(new_bad)
        diag.bad_growth.append(added)
        problems = []
        if added > growth_cap:
            problems.append(f"t={state.t}: {added} new bad pairs exceed Delta*eps1*N")
        if exceptional:
            _record_case2(state, x, a)
        if checking:
            diag.invariant_checks += 1
            problems.extend(state.check_invariants(previous_C))
        if problems:
            diag.invariant_violations.extend(problems)
            raise InternalError("; ".join(problems))
        if state.t == state.T0 and not state.e2_done:
            detect_exceptional_G2(state)
        if state.t % state.T1 == 0:
            detect_exceptional_H(state)
        diag.min_H_series.append(min((state.H[y].bit_count() for c in state.unembedded for y in c), default=0))
    state.T = state.t
    diag.T = state.t
    diag.bad_total = state.bad_pairs
    if diag.min_H_series:
        diag.min_H_set = min(diag.min_H_series)
        diag.min_H_above_d2N = diag.min_H_set > th.d2 * state.N
    uncovered = [state.N - z.bit_count() for z in state.Z]
    diag.uncovered_ok = all(k >= (th.d1 - th.d2) * state.N for k in uncovered)
    return state


def _record_case2(state: EmbeddingState, x: int, a: int) -> None:
    i = state.psi[x]
    level = 1 if x in state.EH1 else 2
    exceptional_count = len(state.EH1) + len(state.EH2)
    floor_deg = state.th.delta * state.N - state.T0 - exceptional_count
    nbrs = []
    for y in state.unembedded_neighbors(x):
        h = state.H[y].bit_count()
        nbrs.append(
            {
                "y": y,
                "deg_into_class": state.host.row(i, a, state.psi[y]).bit_count(),
                "C_size": state.C[y].bit_count(),
                "H_size": h,
                "degree_slack": float(h - floor_deg),
            }
        )
    state.diag.case2_events.append(
        {
            "t": state.t,
            "x": x,
            "v": state.phi[x],
            "level": level,
            "cluster": i,
            "offset": a,
            "in_pool": a in (state.E1 if level == 1 else state.E2)[i],
            "neighbors": nbrs,
        }
    )
