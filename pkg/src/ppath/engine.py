"""Constructive machinery for long path powers.

Pieces: the ordering/long-path dichotomy for oriented graphs, good-pair and
good-tuple detection inside dense bipartite pairs, a sampling-based
regularity probe, and the alternating chain construction that flattens a
sequence of good tuples into a verified path power. All operations are pure
given (inputs, params, seed); thresholds are compared in exact rational
arithmetic, never by float equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .exact import PowerPath, verify_power_path
from .rng import Rng, derive_seed
from .tournament import BipartitePair, Tournament, VertexSet

# Cap on full k-tuples examined per good-tuple search (k >= 3 only).
_TUPLE_SCAN_CAP = 50_000


class InvalidVertexError(ValueError):
    """Queried vertex is not a member of the required side."""


def _ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class OrientedGraph:
    """Digraph with no loops and at most one direction per vertex pair."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n != len(self.rows):
            raise ValueError("row count disagrees with n")
        for i, r in enumerate(self.rows):
            if r < 0 or r >> self.n:
                raise ValueError(f"row {i} has bits outside 0..{self.n - 1}")
            if (r >> i) & 1:
                raise ValueError(f"self-loop at vertex {i}")
        for i, r in enumerate(self.rows):
            m = r
            while m:
                b = m & -m
                j = b.bit_length() - 1
                m ^= b
                if (self.rows[j] >> i) & 1:
                    raise ValueError(f"pair ({i},{j}) oriented both ways")


def random_oriented_graph(n: int, edge_prob: float, seed: int) -> OrientedGraph:
    """Each unordered pair carries an edge with probability edge_prob, fair
    coin orientation; fully determined by (n, edge_prob, seed)."""
    rng = Rng(derive_seed(seed, "oriented", n))
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                if rng.next_u64() & 1:
                    rows[i] |= 1 << j
                else:
                    rows[j] |= 1 << i
    return OrientedGraph(n, tuple(rows))


@dataclass(frozen=True)
class OrderingCertificate:
    """Vertex order in which everyone has <= k-1 in-neighbors placed later."""

    order: tuple[int, ...]
    k: int


def order_or_long_path(
    g: Union[Tournament, OrientedGraph], k: int
) -> Union[OrderingCertificate, PowerPath]:
    """Either peel an ordering with back-in-degree <= k-1 at every position,
    or produce a directed path with at least k edges.

    Peeling removes the smallest-label vertex of current in-degree <= k-1.
    If at some point every remaining vertex has in-degree >= k, a backward
    greedy walk inside the remainder yields the path: while the walk spans
    fewer than k edges its head still has an unvisited in-neighbor, so a
    stall certifies >= k edges. Total on every input.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = g.n
    rows = g.rows
    in_rows = [0] * n
    for i, r in enumerate(rows):
        m = r
        while m:
            b = m & -m
            in_rows[b.bit_length() - 1] |= 1 << i
            m ^= b
    remaining = (1 << n) - 1
    order: list[int] = []
    while remaining:
        peeled = -1
        m = remaining
        while m:
            b = m & -m
            v = b.bit_length() - 1
            m ^= b
            if (in_rows[v] & remaining).bit_count() <= k - 1:
                peeled = v
                break
        if peeled >= 0:
            order.append(peeled)
            remaining &= ~(1 << peeled)
            continue
        head = (remaining & -remaining).bit_length() - 1
        walk = [head]
        on_path = 1 << head
        while True:
            preds = in_rows[walk[0]] & remaining & ~on_path
            if not preds:
                break
            u = (preds & -preds).bit_length() - 1
            walk.insert(0, u)
            on_path |= 1 << u
        return PowerPath(1, tuple(walk))
    return OrderingCertificate(tuple(order), k)


@dataclass(frozen=True)
class RegularityParams:
    """Tolerances for the probe machinery: 0 < eps < delta <= 1/2."""

    eps: float = 0.01
    delta: float = 0.1
    parts: int = 8
    samples: int = 8

    def __post_init__(self) -> None:
        if not 0 < self.eps < self.delta <= 0.5:
            raise ValueError("need 0 < eps < delta <= 1/2")
        if self.parts < 2:
            raise ValueError("parts must be >= 2")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    @property
    def eps_f(self) -> Fraction:
        return Fraction(self.eps)

    @property
    def delta_f(self) -> Fraction:
        return Fraction(self.delta)


DEFAULT_PARAMS = RegularityParams()


@dataclass(frozen=True)
class GoodPair:
    """Same-side pair whose joint forward neighborhood is large.

    x -> y is the tournament edge inside the side; witness_size counts
    N+(x) & N+(y) restricted to the pair's far side.
    """

    x: int
    y: int
    pair: BipartitePair
    witness_size: int


def _min_good_count(d: Fraction, eps_f: Fraction, target_size: int, k: int = 2) -> int:
    """Smallest integer count satisfying count >= (d^k - 10(k-1)eps) * size."""
    threshold = (d**k - 10 * (k - 1) * eps_f) * target_size
    if threshold <= 0:
        return 0
    return _ceil_frac(threshold)


def good_pair_threshold(pair: BipartitePair, params: RegularityParams) -> int:
    """Minimum joint forward count that makes a side-a pair good."""
    return _min_good_count(pair.d_ab, params.eps_f, len(pair.b))


def is_good_pair(
    t: Tournament, pair: BipartitePair, x: int, y: int, params: RegularityParams
) -> bool:
    """Exact integer test of |N+(x) & N+(y) & B| >= (d^2 - 10 eps)|B|,
    with d the pair's measured a->b density."""
    if x == y or x not in pair.a or y not in pair.a:
        raise InvalidVertexError("x, y must be distinct members of side a")
    count = (t.rows[x] & t.rows[y] & pair.b.mask).bit_count()
    return count >= good_pair_threshold(pair, params)


def find_good_pair(
    t: Tournament, pair: BipartitePair, f: VertexSet, params: RegularityParams
) -> Optional[GoodPair]:
    """First good pair within f in increasing-label order, or None.

    The returned pair is oriented by its tournament edge (x -> y).
    """
    if f.mask & ~pair.a.mask:
        raise InvalidVertexError("f must be a subset of side a")
    need = good_pair_threshold(pair, params)
    got = _first_good_pair_masked(t.rows, f.mask, pair.b.mask, need)
    if got is None:
        return None
    x, y = got
    return GoodPair(x, y, pair, (t.rows[x] & t.rows[y] & pair.b.mask).bit_count())


def sampled_regular(
    t: Tournament,
    pair: BipartitePair,
    params: RegularityParams,
    seed: int = 0,
) -> tuple[bool, Optional[tuple[VertexSet, VertexSet]]]:
    """Probe regularity by sampling sub-pairs of sizes ceil(eps|A|), ceil(eps|B|).

    Regular iff every sampled sub-density lies in [d - eps, d + eps] (exact
    rational comparison against the pair's measured density); otherwise the
    first violating sub-pair is returned as a checkable witness. Verdicts are
    a pure function of (pair, params, seed).
    """
    na, nb = len(pair.a), len(pair.b)
    if na == 0 or nb == 0:
        raise ValueError("both sides must be nonempty")
    eps_f = params.eps_f
    sa = _ceil_frac(eps_f * na)
    sb = _ceil_frac(eps_f * nb)
    rng = Rng(derive_seed(seed, "regular"))
    a_members = pair.a.members()
    b_members = pair.b.members()
    rows = t.rows
    d = pair.d_ab
    for _ in range(params.samples):
        sub_a = rng.sample(a_members, sa)
        sub_b = rng.sample(b_members, sb)
        bmask = 0
        for v in sub_b:
            bmask |= 1 << v
        edges = sum((rows[x] & bmask).bit_count() for x in sub_a)
        dd = Fraction(edges, sa * sb)
        if dd < d - eps_f or dd > d + eps_f:
            return False, (
                VertexSet.from_iterable(sub_a, t.n),
                VertexSet.from_iterable(sub_b, t.n),
            )
    return True, None


def _iter_bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def _first_good_pair_masked(
    rows: tuple[int, ...], f_mask: int, target_mask: int, need: int
) -> Optional[tuple[int, int]]:
    """Lex-first pair within f_mask whose joint forward count into
    target_mask reaches need; oriented by the internal edge."""
    members = _iter_bits(f_mask)
    for i, x in enumerate(members):
        rx = rows[x]
        for y in members[i + 1 :]:
            if (rx & rows[y] & target_mask).bit_count() >= need:
                return (x, y) if (rx >> y) & 1 else (y, x)
    return None


def _first_good_tuple_masked(
    rows: tuple[int, ...], f_mask: int, target_mask: int, need: int, k: int
) -> Optional[tuple[int, ...]]:
    """First transitively ordered k-tuple within f_mask whose joint forward
    count into target_mask reaches need.

    Tuples are explored in nested ascending-label order; each next member is
    drawn from the running forward intersection, which forces the internal
    transitive orientation. The scan is capped at _TUPLE_SCAN_CAP full
    tuples, deterministically.
    """
    if f_mask.bit_count() < k:
        return None
    checked = 0

    def extend(tup: list[int], allowed: int) -> Optional[tuple[int, ...]]:
        nonlocal checked
        m = allowed
        while m:
            b = m & -m
            v = b.bit_length() - 1
            m ^= b
            tup.append(v)
            if len(tup) == k:
                checked += 1
                joint = target_mask
                for u in tup:
                    joint &= rows[u]
                if joint.bit_count() >= need:
                    return tuple(tup)
                tup.pop()
                if checked >= _TUPLE_SCAN_CAP:
                    return None
            else:
                got = extend(tup, allowed & rows[v])
                if got is not None:
                    return got
                tup.pop()
                if checked >= _TUPLE_SCAN_CAP:
                    return None
        return None

    return extend([], f_mask)


def _chain_tuples(
    t: Tournament,
    pair: BipartitePair,
    k: int,
    params: RegularityParams,
    start_side: str,
) -> list[tuple[int, ...]]:
    """Alternating sequence of good k-tuples; goodness on both sides is
    judged against the single pair density d = d_ab."""
    rows = t.rows
    a_mask, b_mask = pair.a.mask, pair.b.mask
    d = pair.d_ab
    eps_f = params.eps_f
    need_into = {
        b_mask: _min_good_count(d, eps_f, len(pair.b), k),
        a_mask: _min_good_count(d, eps_f, len(pair.a), k),
    }
    if start_side == "a":
        side_mask, other_mask = a_mask, b_mask
    elif start_side == "b":
        side_mask, other_mask = b_mask, a_mask
    else:
        raise ValueError("start_side must be 'a' or 'b'")
    used = 0
    tuples: list[tuple[int, ...]] = []
    f_mask = side_mask
    while True:
        need = need_into[other_mask]
        if k == 2:
            tup = _first_good_pair_masked(rows, f_mask, other_mask, need)
        else:
            tup = _first_good_tuple_masked(rows, f_mask, other_mask, need, k)
        if tup is None:
            break
        tuples.append(tup)
        common = other_mask
        for v in tup:
            used |= 1 << v
            common &= rows[v]
        f_mask = common & ~used
        side_mask, other_mask = other_mask, side_mask
    return tuples


def chain_power_path(
    t: Tournament,
    pair: BipartitePair,
    k: int,
    params: RegularityParams,
    start_side: str = "a",
) -> PowerPath:
    """Flatten an alternating good-tuple chain into a verified k-power.

    Total on any pair: an empty or k-vertex result signals immediate stall.
    The flattened sequence is verified before returning and truncated to the
    longest verified prefix if that check ever failed.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    tuples = _chain_tuples(t, pair, k, params, start_side)
    flat = tuple(v for tup in tuples for v in tup)
    if __debug__ and tuples:
        assert len(set(flat)) == len(flat), "chain reused a vertex"
        sides = [0 if (1 << tup[0]) & pair.a.mask else 1 for tup in tuples]
        assert all(
            sides[i] != sides[i + 1] for i in range(len(sides) - 1)
        ), "chain did not alternate sides"
    while True:
        path = PowerPath(k, flat)
        ok, violation = verify_power_path(t, path)
        if ok:
            return path
        flat = flat[: violation[1]]


def chain_square_path(
    t: Tournament,
    pair: BipartitePair,
    params: RegularityParams,
    start_side: str = "a",
) -> PowerPath:
    """Square-of-a-path chain (k=2 instantiation of chain_power_path)."""
    return chain_power_path(t, pair, 2, params, start_side)


def weak_count_threshold(params: RegularityParams, num_parts: int) -> int:
    """Integer count for the weak-vertex rule 2*sqrt(eps)*l', with a 1e-9
    absolute tolerance applied before rounding up."""
    return max(1, math.ceil(2.0 * math.sqrt(params.eps) * num_parts - 1e-9))
