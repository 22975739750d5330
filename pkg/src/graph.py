from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

from .const import CSG_LOGGER_NAME, MAX_VERTICES
from .exceptions import CapacityError, DomainError, PreconditionError

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Sequence

    from .solver import SubtractionSet

type VertexSet = int

logger = logging.getLogger(CSG_LOGGER_NAME)


def iter_bits(bits: VertexSet) -> Iterator[int]:
    """Yield the vertex indices of a bitset in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def vertex_set(vertices: Iterable[int]) -> VertexSet:
    bits = 0
    for v in vertices:
        bits |= 1 << v
    return bits


def _check_capacity(n: int) -> None:
    if n > MAX_VERTICES:
        raise CapacityError(f'Graph with {n} vertices exceeds the {MAX_VERTICES}-vertex capacity')


@dataclass(frozen=True, slots=True)
class Graph:
    """Simple undirected connected graph on vertices 0..n-1 with per-vertex adjacency bitsets."""

    n: int
    adj: tuple[int, ...] = field(repr=False)

    def __post_init__(self) -> None:
        _check_capacity(self.n)
        if self.n < 0 or len(self.adj) != self.n:
            raise PreconditionError(f'Adjacency list of length {len(self.adj)} does not match n={self.n}')
        full = self.full
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise PreconditionError(f'Vertex {v} has a neighbor outside 0..{self.n - 1}')
            if row >> v & 1:
                raise PreconditionError(f'Vertex {v} has a loop')
            for w in iter_bits(row):
                if not self.adj[w] >> v & 1:
                    raise PreconditionError(f'Edge {v}-{w} is not symmetric')
        if not is_connected(self, full):
            raise PreconditionError('Game graphs must be connected')

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        _check_capacity(n)
        adj = [0] * n
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise PreconditionError(f'Edge {a}-{b} is outside 0..{n - 1}')
            if a == b:
                raise PreconditionError(f'Edge {a}-{b} is a loop')
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return cls(n, tuple(adj))

    @property
    def full(self) -> VertexSet:
        return (1 << self.n) - 1

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in range(self.n) for w in iter_bits(self.adj[v]) if v < w]

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def neighborhood(self, bits: VertexSet) -> VertexSet:
        out = 0
        for v in iter_bits(bits):
            out |= self.adj[v]
        return out


@dataclass(frozen=True, slots=True)
class SubdividedStar:
    """Center vertex with pendant paths; `branches` is kept sorted descending with zeros dropped."""

    branches: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(b < 0 for b in self.branches):
            raise PreconditionError(f'Branch lengths must be nonnegative, got {self.branches}')
        object.__setattr__(self, 'branches', tuple(sorted((b for b in self.branches if b), reverse=True)))

    @classmethod
    def of(cls, *branches: int) -> SubdividedStar:
        return cls(tuple(branches))

    @classmethod
    def simple(cls, t: int, k: int = 0) -> SubdividedStar:
        """The star S(1^t, k): t leaves plus one branch of length k."""
        return cls((1,) * t + (k,))

    @property
    def size(self) -> int:
        return 1 + sum(self.branches)

    @property
    def is_path(self) -> bool:
        return len(self.branches) <= 2

    @property
    def path_key(self) -> SubdividedStar:
        """Memo key merging isomorphic paths: a path on m vertices becomes S(m-1)."""
        if len(self.branches) == 2:
            return SubdividedStar((self.branches[0] + self.branches[1],))
        return self

    def extended(self, index: int, delta: int) -> SubdividedStar:
        """Add `delta` to branch `index`; index == len(branches) appends a new branch."""
        branches = list(self.branches)
        if index == len(branches):
            branches.append(delta)
        else:
            branches[index] += delta
        return SubdividedStar(tuple(branches))

    def reduced(self, modulus: int) -> SubdividedStar:
        return SubdividedStar(tuple(b % modulus for b in self.branches))

    def __str__(self) -> str:
        return f'S({",".join(map(str, self.branches))})'


class MoveKind(str, Enum):
    TIP = 'tip'
    CENTER = 'center'
    WHOLE = 'whole'


@dataclass(frozen=True, slots=True)
class StarOption:
    kind: MoveKind
    removed: int
    # None is the empty graph.
    result: SubdividedStar | None


@dataclass(frozen=True, slots=True)
class AppendSpec:
    """The graph G.u.k: `base` with a fresh k-vertex path hung at `anchor` (no anchor for the empty base)."""

    base: Graph
    anchor: int | None
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise PreconditionError(f'Appended path length must be nonnegative, got {self.k}')
        if self.base.n == 0:
            if self.anchor is not None:
                raise PreconditionError('The empty base takes no anchor')
        elif self.anchor is None or not 0 <= self.anchor < self.base.n:
            raise PreconditionError(f'Anchor {self.anchor} is not a vertex of the base graph')

    @property
    def size(self) -> int:
        return self.base.n + self.k

    def path_mask(self, k: int | None = None) -> VertexSet:
        """Bitset of the first k appended vertices, counted from the anchor."""
        k = self.k if k is None else k
        return ((1 << k) - 1) << self.base.n

    def realize(self) -> Graph:
        return append_path(self)


def make_path(k: int) -> Graph:
    if k < 0:
        raise PreconditionError(f'Path length must be nonnegative, got {k}')
    _check_capacity(k)
    return Graph.from_edges(k, ((i, i + 1) for i in range(k - 1)))


def make_subdivided_star(branches: Sequence[int]) -> Graph:
    """Realize S(l1,...,lt) with center 0 and branch i on a contiguous index range, inner vertex first."""
    if any(b < 0 for b in branches):
        raise PreconditionError(f'Branch lengths must be nonnegative, got {list(branches)}')
    n = 1 + sum(branches)
    _check_capacity(n)
    edges = []
    nxt = 1
    for length in branches:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(n, edges)


def star_branch_paths(g: Graph, center: int = 0) -> list[list[int]]:
    """Vertices of each branch of a subdivided star, listed from the center outward."""
    if not 0 <= center < g.n:
        raise DomainError(f'Vertex {center} is not in the graph')
    seen = 1 << center
    paths = []
    for first in iter_bits(g.adj[center]):
        prev, cur = center, first
        seen |= 1 << cur
        path = [cur]
        while onward := g.adj[cur] & ~(1 << prev):
            if onward.bit_count() > 1 or onward & seen:
                raise DomainError(f'Graph is not a subdivided star centered at vertex {center}')
            prev, cur = cur, onward.bit_length() - 1
            seen |= 1 << cur
            path.append(cur)
        paths.append(path)
    if seen != g.full:
        raise DomainError(f'Graph is not a subdivided star centered at vertex {center}')
    return paths


def read_star(g: Graph) -> SubdividedStar:
    """Read branch lengths back from a subdivided star centered at vertex 0."""
    return SubdividedStar(tuple(len(path) for path in star_branch_paths(g)))


def append_path(spec: AppendSpec) -> Graph:
    base = spec.base
    n = spec.size
    _check_capacity(n)
    edges = base.edges()
    prev = spec.anchor
    for v in range(base.n, n):
        if prev is not None:
            edges.append((prev, v))
        prev = v
    return Graph.from_edges(n, edges)


def is_connected(g: Graph, s: VertexSet) -> bool:
    """Whether the subgraph induced by `s` is connected; the empty set counts as connected."""
    if s & ~g.full:
        raise PreconditionError(f'Vertex set {s:#x} is not a subset of the graph vertices')
    if s == 0:
        return True
    reached = s & -s
    frontier = reached
    while frontier:
        grow = 0
        for v in iter_bits(frontier):
            grow |= g.adj[v]
        frontier = grow & s & ~reached
        reached |= frontier
    return reached == s


EMPTY_GRAPH = Graph(0, ())


def connected_subsets(g: Graph, live: VertexSet, max_size: int) -> Iterator[VertexSet]:
    """Yield every connected subset of `live` with at most `max_size` vertices, each exactly once.

    Each subset is grown from its minimum vertex through its boundary only; candidates already branched
    on at a level are excluded below it so no subset is reached twice.
    """
    remaining = live
    for anchor in iter_bits(live):
        bit = 1 << anchor
        stack = [(bit, g.adj[anchor] & remaining & ~bit, 0)]
        while stack:
            chosen, candidates, excluded = stack.pop()
            yield chosen
            if chosen.bit_count() >= max_size:
                continue
            branched = 0
            for w in iter_bits(candidates):
                wbit = 1 << w
                branched |= wbit
                grown = chosen | wbit
                blocked = excluded | branched
                stack.append((grown, (candidates | g.adj[w]) & remaining & ~grown & ~blocked, blocked & ~wbit))
        remaining &= ~bit


def enumerate_removals(g: Graph, live: VertexSet, subtraction: SubtractionSet) -> Iterator[VertexSet]:
    """Yield the legal removals from position `live`, ordered by bitset value.

    A removal is a connected subset whose size is in the subtraction set and whose complement in
    `live` is connected or empty.
    """
    found = [
        h
        for h in connected_subsets(g, live, subtraction.max)
        if h.bit_count() in subtraction and is_connected(g, live & ~h)
    ]
    found.sort()
    yield from found


def star_removals(star: SubdividedStar, subtraction: SubtractionSet) -> Iterator[StarOption]:
    """Yield one option per legal removal on a subdivided star, results in canonical form."""
    branches = star.branches
    for i, length in enumerate(branches):
        for c in subtraction:
            if c > length:
                break
            yield StarOption(MoveKind.TIP, c, SubdividedStar(branches[:i] + (length - c,) + branches[i + 1 :]))
    total = sum(branches)
    for j, length in enumerate(branches):
        others = 1 + total - length
        for p in range(length):
            if others + p in subtraction:
                yield StarOption(MoveKind.CENTER, others + p, SubdividedStar((length - p - 1,)))
    if star.size in subtraction:
        yield StarOption(MoveKind.WHOLE, star.size, None)
