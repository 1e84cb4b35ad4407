"""epsilon-regularity and super-regularity checks for bipartite pairs.

The exhaustive checker certifies regularity for small pairs; the sampled
checker only ever finds witnesses (``no-witness-found`` is not a certificate).
Ties at the boundary count as witnesses: a pair is regular only when every
large enough sub-pair deviates by strictly less than eps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, List, Optional, Tuple

from . import bitset
from .graph import PartitionedHost
from .util import Number, as_fraction, floor_frac

REGULAR_CERTIFIED = "regular-certified"
IRREGULAR_WITNESSED = "irregular-witnessed"
NO_WITNESS_FOUND = "no-witness-found"

EXHAUSTIVE_LIMIT = 14


class CapabilityError(ValueError):
    """Raised when an exact check is requested on a pair that is too large."""


@dataclass(frozen=True)
class BipartitePair:
    """A pair (A, B): ``rows[a]`` is the bitset of B-neighbors of a in A."""

    rows: Tuple[int, ...]
    right_count: int

    def __post_init__(self) -> None:
        limit = bitset.full(self.right_count)
        if any(row & ~limit for row in self.rows):
            raise ValueError("row has neighbors outside the right side")

    @classmethod
    def from_edges(cls, left: int, right: int, edges: Iterable[Tuple[int, int]]) -> "BipartitePair":
        rows = [0] * left
        for a, b in edges:
            rows[a] |= 1 << b
        return cls(tuple(rows), right)

    @classmethod
    def from_host(cls, host: PartitionedHost, i: int, j: int) -> "BipartitePair":
        return cls(host.pair_rows(i, j), host.N)

    @property
    def left_count(self) -> int:
        return len(self.rows)

    @cached_property
    def cols(self) -> Tuple[int, ...]:
        cols = [0] * self.right_count
        for a, row in enumerate(self.rows):
            for b in bitset.iter_bits(row):
                cols[b] |= 1 << a
        return tuple(cols)

    def swapped(self) -> "BipartitePair":
        return BipartitePair(self.cols, self.left_count)

    @cached_property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def density(self) -> Fraction:
        if not self.rows or not self.right_count:
            raise ValueError("density of a pair with an empty side")
        return Fraction(self.edge_count, self.left_count * self.right_count)

    def edges_between(self, X: int, Y: int) -> int:
        return sum((self.rows[a] & Y).bit_count() for a in bitset.iter_bits(X))

    def sub_density(self, X: int, Y: int) -> Fraction:
        if not X or not Y:
            raise ValueError("density needs nonempty X and Y")
        return Fraction(self.edges_between(X, Y), X.bit_count() * Y.bit_count())


@dataclass(frozen=True)
class Witness:
    X: int
    Y: int
    d_XY: Fraction
    d_AB: Fraction

    @property
    def deviation(self) -> Fraction:
        return abs(self.d_XY - self.d_AB)


@dataclass(frozen=True)
class RegularityVerdict:
    status: str
    witness: Optional[Witness]
    trials: int

    @property
    def irregular(self) -> bool:
        return self.status == IRREGULAR_WITNESSED


def min_subset_size(eps: Fraction, side: int) -> int:
    """Smallest integer strictly greater than eps * side."""
    return floor_frac(eps * side) + 1


def witness_is_valid(pair: BipartitePair, eps: Number, w: Witness) -> bool:
    """Re-verify a witness from scratch."""
    eps = as_fraction(eps)
    A, B = pair.left_count, pair.right_count
    if w.X.bit_count() <= eps * A or w.Y.bit_count() <= eps * B:
        return False
    if w.X >> A or w.Y >> B:
        return False
    d_xy = pair.sub_density(w.X, w.Y)
    return d_xy == w.d_XY and abs(d_xy - pair.density()) >= eps


def _check_eps(eps: Fraction) -> None:
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")


def check_regular_exact(pair: BipartitePair, eps: Number, limit: int = EXHAUSTIVE_LIMIT) -> RegularityVerdict:
    """Decide eps-regularity by enumerating every large enough X.

    For a fixed X the extreme values of e(X, Y) over |Y| = k are the sums of
    the k largest / smallest degrees into X, so only X needs enumerating.
    Returns the witness of maximal deviation when the pair is irregular.
    """
    eps = as_fraction(eps)
    _check_eps(eps)
    A, B = pair.left_count, pair.right_count
    if A > limit or B > limit:
        raise CapabilityError(
            f"pair is {A}x{B}; exhaustive check is limited to {limit} per side, use check_regular_sampled"
        )
    if A == 0 or B == 0:
        return RegularityVerdict(REGULAR_CERTIFIED, None, 0)
    swap = A > B
    work = pair.swapped() if swap else pair
    A, B = work.left_count, work.right_count
    E = work.edge_count
    p, q = eps.numerator, eps.denominator
    kx_min = min_subset_size(eps, A)
    ky_min = min_subset_size(eps, B)
    cols = work.cols
    best = None  # (X, Y, d_XY) of the largest deviation so far
    best_dev = Fraction(-1)
    checked = 0
    AB = A * B
    for X in range(1, 1 << A):
        x = X.bit_count()
        if x < kx_min:
            continue
        checked += 1
        degs = sorted(((cols[b] & X).bit_count(), b) for b in range(B))
        lo = hi = 0
        for k in range(1, B + 1):
            lo += degs[k - 1][0]
            hi += degs[B - k][0]
            if k < ky_min:
                continue
            xk = x * k
            # e/(xk) - E/(AB) >= p/q  <=>  q(e*AB - E*xk) >= p*xk*AB
            up = q * (hi * AB - E * xk) >= p * xk * AB
            down = q * (E * xk - lo * AB) >= p * xk * AB
            if up or down:
                e = hi if up and (not down or hi * AB - E * xk >= E * xk - lo * AB) else lo
                dev = abs(Fraction(e, xk) - Fraction(E, AB))
                if dev > best_dev:
                    members = degs[B - k:] if e == hi else degs[:k]
                    best_dev = dev
                    best = (X, bitset.from_iter(b for _, b in members), Fraction(e, xk))
    if best is None:
        return RegularityVerdict(REGULAR_CERTIFIED, None, checked)
    X, Y, d_xy = best
    if swap:
        X, Y = Y, X
    return RegularityVerdict(IRREGULAR_WITNESSED, Witness(X, Y, d_xy, Fraction(E, AB)), checked)


def check_regular_sampled(pair: BipartitePair, eps: Number, trials: int, seed: int) -> RegularityVerdict:
    """Search for an irregularity witness among ``trials`` random sub-pairs.

    Sizes are uniform over the admissible range, members uniform given the size.
    """
    eps = as_fraction(eps)
    _check_eps(eps)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    A, B = pair.left_count, pair.right_count
    if A == 0 or B == 0:
        return RegularityVerdict(NO_WITNESS_FOUND, None, 0)
    rng = random.Random(seed)
    kx_min = min_subset_size(eps, A)
    ky_min = min_subset_size(eps, B)
    if kx_min > A or ky_min > B:
        return RegularityVerdict(NO_WITNESS_FOUND, None, 0)
    d_ab = pair.density()
    for trial in range(1, trials + 1):
        X = bitset.from_iter(rng.sample(range(A), rng.randint(kx_min, A)))
        Y = bitset.from_iter(rng.sample(range(B), rng.randint(ky_min, B)))
        d_xy = pair.sub_density(X, Y)
        if abs(d_xy - d_ab) >= eps:
            return RegularityVerdict(IRREGULAR_WITNESSED, Witness(X, Y, d_xy, d_ab), trial)
    return RegularityVerdict(NO_WITNESS_FOUND, None, trials)


@dataclass(frozen=True)
class SuperRegularVerdict:
    degree_ok_A: bool
    degree_ok_B: bool
    min_deg_A: int
    min_deg_B: int
    low_A: Tuple[int, ...]
    low_B: Tuple[int, ...]
    density: Fraction
    density_ok: bool
    regularity: RegularityVerdict

    @property
    def ok(self) -> bool:
        """True when no condition is known to fail (sampled regularity is one-sided)."""
        return self.degree_ok_A and self.degree_ok_B and self.density_ok and not self.regularity.irregular


def check_super_regular(
    pair: BipartitePair,
    eps: Number,
    d: Number,
    delta: Number,
    trials: int = 1000,
    seed: int = 0,
) -> SuperRegularVerdict:
    """Check (eps, d, delta)-super-regularity: exact degree and density tests,
    exhaustive regularity when small enough, sampled otherwise."""
    eps, d, delta = as_fraction(eps), as_fraction(d), as_fraction(delta)
    for name, val in (("eps", eps), ("d", d), ("delta", delta)):
        if not 0 < val <= 1:
            raise ValueError(f"{name} must lie in (0, 1]")
    A, B = pair.left_count, pair.right_count
    deg_A = [row.bit_count() for row in pair.rows]
    deg_B = [col.bit_count() for col in pair.cols]
    low_A = tuple(a for a, k in enumerate(deg_A) if k < delta * B)
    low_B = tuple(b for b, k in enumerate(deg_B) if k < delta * A)
    dens = pair.density()
    if eps < 1 and max(A, B) <= EXHAUSTIVE_LIMIT:
        reg = check_regular_exact(pair, eps)
    elif eps < 1:
        reg = check_regular_sampled(pair, eps, trials, seed)
    else:
        reg = RegularityVerdict(REGULAR_CERTIFIED, None, 0)
    return SuperRegularVerdict(
        degree_ok_A=not low_A,
        degree_ok_B=not low_B,
        min_deg_A=min(deg_A, default=0),
        min_deg_B=min(deg_B, default=0),
        low_A=low_A,
        low_B=low_B,
        density=dens,
        density_ok=dens >= d,
        regularity=reg,
    )


def list_low_degree_vertices(host: PartitionedHost, i: int, j: int, threshold_fraction: Number) -> List[int]:
    """Global ids of v in V_i with deg(v, V_j) < threshold_fraction * N."""
    if not host.cluster_graph.has_edge(i, j):
        raise ValueError(f"clusters {i},{j} are not adjacent in R")
    bound = as_fraction(threshold_fraction) * host.N
    return [host.vertex(i, a) for a, row in enumerate(host.pair_rows(i, j)) if row.bit_count() < bound]

