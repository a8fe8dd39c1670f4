"""Tournament representation, generators and set/density primitives.

A tournament on n vertices is stored as n row bitsets: bit j of ``rows[i]``
is 1 exactly when the edge i->j is present. Vertex labels are 0-based.
Tournaments and vertex sets are immutable; every operation here is a pure
function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .rng import Rng, derive_seed, stream_word


class InvalidSizeError(ValueError):
    """Vertex count outside the operation's domain."""


class InvalidResiduesError(ValueError):
    """Residue set is not an antisymmetric complete system mod n."""


class EmptySetError(ValueError):
    """Operation requires a nonempty vertex set."""


class InvalidPairError(ValueError):
    """Sides of a bipartite pair overlap or are empty."""


@dataclass(frozen=True)
class VertexSet:
    """Subset of {0..host_n-1} stored as a bitmask."""

    mask: int
    host_n: int

    def __post_init__(self) -> None:
        if self.host_n < 0 or self.mask < 0 or self.mask >> self.host_n:
            raise ValueError("vertex set not contained in host range")

    @classmethod
    def from_iterable(cls, members: Iterable[int], host_n: int) -> "VertexSet":
        mask = 0
        for v in members:
            if not 0 <= v < host_n:
                raise ValueError(f"vertex {v} outside host range 0..{host_n - 1}")
            mask |= 1 << v
        return cls(mask, host_n)

    @classmethod
    def full(cls, host_n: int) -> "VertexSet":
        return cls((1 << host_n) - 1, host_n)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            b = m & -m
            yield b.bit_length() - 1
            m ^= b

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.host_n and bool((self.mask >> v) & 1)

    def _check_host(self, other: "VertexSet") -> None:
        if self.host_n != other.host_n:
            raise ValueError("vertex sets live in different hosts")

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._check_host(other)
        return VertexSet(self.mask & other.mask, self.host_n)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._check_host(other)
        return VertexSet(self.mask | other.mask, self.host_n)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._check_host(other)
        return VertexSet(self.mask & ~other.mask, self.host_n)

    def isdisjoint(self, other: "VertexSet") -> bool:
        self._check_host(other)
        return not (self.mask & other.mask)

    def members(self) -> tuple[int, ...]:
        return tuple(self)


def _validate_rows(rows: tuple[int, ...]) -> None:
    n = len(rows)
    if n < 1:
        raise InvalidSizeError("tournament needs at least one vertex")
    for i, r in enumerate(rows):
        if r < 0 or r >> n:
            raise ValueError(f"row {i} has bits outside 0..{n - 1}")
        if (r >> i) & 1:
            raise ValueError(f"self-loop at vertex {i}")
    if n <= 64:
        for i in range(n):
            ri = rows[i]
            for j in range(i + 1, n):
                if ((ri >> j) & 1) == ((rows[j] >> i) & 1):
                    raise ValueError(f"pair ({i},{j}) is not oriented exactly once")
        return
    # Large instances: vectorized M + M^T == all-ones-off-diagonal check.
    nbytes = (n + 7) // 8
    buf = np.frombuffer(
        b"".join(r.to_bytes(nbytes, "little") for r in rows), dtype=np.uint8
    ).reshape(n, nbytes)
    mat = np.unpackbits(buf, axis=1, bitorder="little")[:, :n]
    good = mat + mat.T + np.eye(n, dtype=np.uint8)
    if not (good == 1).all():
        bad = np.argwhere(good != 1)[0]
        raise ValueError(f"pair ({bad[0]},{bad[1]}) is not oriented exactly once")


@dataclass(frozen=True)
class Tournament:
    """Complete oriented graph; ``rows[i]`` holds the out-neighborhood of i."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n != len(self.rows):
            raise ValueError("row count disagrees with n")
        _validate_rows(self.rows)

    @classmethod
    def from_rows(cls, rows: Iterable[int]) -> "Tournament":
        rows = tuple(rows)
        return cls(len(rows), rows)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def out_mask(self, v: int) -> int:
        return self.rows[v]

    def in_mask(self, v: int) -> int:
        return self.full_mask & ~self.rows[v] & ~(1 << v)

    def out_degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.n - 1 - self.out_degree(v)

    def reverse(self) -> "Tournament":
        full = self.full_mask
        return _unchecked(tuple(full & ~r & ~(1 << i) for i, r in enumerate(self.rows)))


def _unchecked(rows: tuple[int, ...]) -> Tournament:
    """Construct without invariant validation; callers guarantee correctness."""
    t = object.__new__(Tournament)
    object.__setattr__(t, "n", len(rows))
    object.__setattr__(t, "rows", rows)
    return t


def transitive(n: int) -> Tournament:
    """Acyclic tournament with i -> j exactly when i < j."""
    if n < 1:
        raise InvalidSizeError("n must be >= 1")
    full = (1 << n) - 1
    return _unchecked(tuple(full ^ ((1 << (i + 1)) - 1) for i in range(n)))


def rotational(n: int, residues: Iterable[int]) -> Tournament:
    """Vertex-transitive tournament with i -> j iff (j - i) mod n in residues."""
    if n < 1 or n % 2 == 0:
        raise InvalidSizeError("n must be odd and positive")
    res = {r % n for r in residues}
    if 0 in res:
        raise InvalidResiduesError("residues must be nonzero mod n")
    if len(res) != (n - 1) // 2:
        raise InvalidResiduesError(f"need exactly {(n - 1) // 2} distinct residues")
    for d in res:
        if (n - d) in res:
            raise InvalidResiduesError(f"residues contain both {d} and {n - d}")
    rows = [0] * n
    for i in range(n):
        for d in res:
            rows[i] |= 1 << ((i + d) % n)
    return _unchecked(tuple(rows))


def _random_rows_pure(n: int, base: int) -> tuple[int, ...]:
    npairs = n * (n - 1) // 2
    nwords = (npairs + 63) // 64
    big = 0
    for w in range(nwords - 1, -1, -1):
        big = (big << 64) | stream_word(base, w)
    rows = [0] * n
    pos = 0
    for i in range(n):
        span = n - 1 - i
        fwd = (big >> pos) & ((1 << span) - 1)
        rows[i] |= fwd << (i + 1)
        back = ~fwd & ((1 << span) - 1)
        while back:
            b = back & -back
            rows[i + b.bit_length()] |= 1 << i
            back ^= b
        pos += span
    return tuple(rows)


def _random_rows_numpy(n: int, base: int) -> tuple[int, ...]:
    npairs = n * (n - 1) // 2
    nwords = (npairs + 63) // 64
    gamma = np.uint64(0x9E3779B97F4A7C15)
    with np.errstate(over="ignore"):
        z = np.uint64(base) + (np.arange(1, nwords + 1, dtype=np.uint64)) * gamma
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    bits = np.unpackbits(z.astype("<u8").view(np.uint8), bitorder="little")[:npairs]
    mat = np.zeros((n, n), dtype=np.uint8)
    iu = np.triu_indices(n, 1)
    mat[iu] = bits
    mat[(iu[1], iu[0])] = 1 - bits
    packed = np.packbits(mat, axis=1, bitorder="little")
    return tuple(int.from_bytes(packed[i].tobytes(), "little") for i in range(n))


def random_tournament(n: int, seed: int) -> Tournament:
    """Uniform random tournament; bit for pair p is independent of draw order.

    The orientation of the p-th unordered pair (pairs (i,j), i<j, in
    lexicographic order) is bit p%64 of the stream word floor(p/64) of the
    stream derived from (seed, n). Same (n, seed) always yields the identical
    matrix, on either assembly path.
    """
    if n < 1:
        raise InvalidSizeError("n must be >= 1")
    base = derive_seed(seed, "tournament", n)
    rows = _random_rows_numpy(n, base) if n >= 64 else _random_rows_pure(n, base)
    return _unchecked(rows)


def common_out_neighborhood(t: Tournament, s: VertexSet) -> VertexSet:
    """Intersection of out-neighborhoods over the members of s.

    Members of s are not subtracted; callers remove used vertices themselves.
    """
    if len(s) == 0:
        raise EmptySetError("common out-neighborhood of the empty set is undefined")
    m = t.full_mask
    for v in s:
        m &= t.rows[v]
    return VertexSet(m, t.n)


def directed_density(t: Tournament, a: VertexSet, b: VertexSet) -> Fraction:
    """Exact fraction of ordered cross pairs (x in a, y in b) with x -> y."""
    if len(a) == 0 or len(b) == 0:
        raise InvalidPairError("both sides must be nonempty")
    if not a.isdisjoint(b):
        raise InvalidPairError("sides overlap")
    edges = sum((t.rows[x] & b.mask).bit_count() for x in a)
    return Fraction(edges, len(a) * len(b))


@dataclass(frozen=True)
class BipartitePair:
    """Two disjoint vertex sets with their exact cross densities."""

    a: VertexSet
    b: VertexSet
    d_ab: Fraction
    d_ba: Fraction

    def __post_init__(self) -> None:
        if not self.a.isdisjoint(self.b):
            raise InvalidPairError("sides overlap")
        if len(self.a) and len(self.b) and self.d_ab + self.d_ba != 1:
            raise InvalidPairError("cross densities must sum to 1")


def bipartite_pair(t: Tournament, a: VertexSet, b: VertexSet) -> BipartitePair:
    d_ab = directed_density(t, a, b)
    return BipartitePair(a, b, d_ab, 1 - d_ab)


def induced(t: Tournament, s: VertexSet) -> tuple[Tournament, tuple[int, ...]]:
    """Subtournament on s with labels compressed to 0..|s|-1.

    Returns (sub, labels) where labels[new] = old; relative label order is
    preserved, so lifting a witness is ``tuple(labels[v] for v in vertices)``.
    """
    if len(s) == 0:
        raise EmptySetError("cannot induce on the empty set")
    labels = s.members()
    m = len(labels)
    rows = []
    for u in labels:
        row_u = t.rows[u]
        r = 0
        for j, v in enumerate(labels):
            r |= ((row_u >> v) & 1) << j
        rows.append(r)
    return _unchecked(tuple(rows)), labels


def random_split(t: Tournament, seed: int) -> tuple[VertexSet, VertexSet]:
    """Seeded balanced bipartition of the vertex set (sizes differ by <= 1)."""
    labels = list(range(t.n))
    Rng(derive_seed(seed, "split")).shuffle(labels)
    half = t.n // 2
    return (
        VertexSet.from_iterable(labels[:half], t.n),
        VertexSet.from_iterable(labels[half:], t.n),
    )
