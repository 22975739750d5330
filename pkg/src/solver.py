from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from operator import xor
from typing import TYPE_CHECKING, ClassVar

from .const import CSG_LOGGER_NAME, MAX_VERTICES
from .exceptions import PreconditionError
from .graph import Graph, SubdividedStar, VertexSet, enumerate_removals, is_connected, star_removals

if TYPE_CHECKING:
    from collections.abc import Callable, Hashable, Iterable, Iterator

type GrundyValue = int

logger = logging.getLogger(CSG_LOGGER_NAME)


def mex(values: Iterable[int]) -> int:
    """Smallest nonnegative integer absent from `values`."""
    seen = 0
    for v in values:
        seen |= 1 << v
    return (~seen & (seen + 1)).bit_length() - 1


def nim_sum(values: Iterable[GrundyValue]) -> GrundyValue:
    return reduce(xor, values, 0)


@dataclass(frozen=True, slots=True)
class SubtractionSet:
    """The legal removal sizes L, sorted and distinct."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        values = tuple(sorted(set(self.values)))
        if not values:
            raise PreconditionError('A subtraction set must not be empty')
        if values[0] < 1 or values[-1] > MAX_VERTICES:
            raise PreconditionError(f'Subtraction set values must lie in 1..{MAX_VERTICES}, got {list(values)}')
        object.__setattr__(self, 'values', values)

    @classmethod
    def of(cls, *values: int) -> SubtractionSet:
        return cls(values)

    @classmethod
    def interval(cls, n: int, *extra: int) -> SubtractionSet:
        """I_N = {1,...,N}, optionally joined with extra sizes."""
        return cls((*range(1, n + 1), *extra))

    @property
    def max(self) -> int:
        return self.values[-1]

    @property
    def interval_bound(self) -> int | None:
        """N when this set is exactly I_N."""
        if self.values == tuple(range(1, self.max + 1)):
            return self.max
        return None

    def __contains__(self, size: object) -> bool:
        return size in self.values

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __str__(self) -> str:
        return ','.join(map(str, self.values))


class Outcome(str, Enum):
    P = 'P'
    N = 'N'

    @classmethod
    def of(cls, value: GrundyValue) -> Outcome:
        return cls.P if value == 0 else cls.N


@dataclass(frozen=True, slots=True)
class Position:
    """A parent graph and the bitset of its surviving vertices."""

    graph: Graph
    live: VertexSet

    def __post_init__(self) -> None:
        if not is_connected(self.graph, self.live):
            raise PreconditionError(f'Position {self.live:#x} does not induce a connected subgraph')

    @classmethod
    def whole(cls, graph: Graph) -> Position:
        return cls(graph, graph.full)

    @property
    def size(self) -> int:
        return self.live.bit_count()


class TranspositionTable[K: Hashable]:
    """Insert-only memo of exact Grundy values.

    Writes are serialized; a second write of a key must carry the same value. A table may be bound to
    a scope (the graph and subtraction set its keys refer to) and then refuses any other scope.
    """

    def __init__(self) -> None:
        self._table: dict[K, GrundyValue] = {}
        self._lock = threading.Lock()
        self._scope: object | None = None

    def bind(self, scope: object) -> None:
        with self._lock:
            if self._scope is None:
                self._scope = scope
            elif self._scope != scope:
                raise PreconditionError('Transposition table is already bound to another graph or subtraction set')

    def get(self, key: K) -> GrundyValue | None:
        return self._table.get(key)

    def __getitem__(self, key: K) -> GrundyValue:
        return self._table[key]

    def store(self, key: K, value: GrundyValue) -> None:
        with self._lock:
            existing = self._table.setdefault(key, value)
        if existing != value:
            raise PreconditionError(f'Conflicting write for {key!r}: {existing} then {value}')

    def items(self) -> list[tuple[K, GrundyValue]]:
        with self._lock:
            return list(self._table.items())

    def audit(self, bound: Callable[[K], int]) -> list[tuple[K, GrundyValue]]:
        """Entries whose value exceeds `bound(key)`."""
        return [(key, value) for key, value in self.items() if value > bound(key)]

    def __contains__(self, key: object) -> bool:
        return key in self._table

    def __len__(self) -> int:
        return len(self._table)


def _solve[K: Hashable](root: K, expand: Callable[[K], list[K]], table: TranspositionTable[K]) -> GrundyValue:
    """Evaluate `root` bottom-up with an explicit work stack; `expand` lists a key's option keys."""
    cached = table.get(root)
    if cached is not None:
        return cached
    pending: dict[K, list[K]] = {}
    stack = [root]
    while stack:
        key = stack[-1]
        if key in table:
            stack.pop()
            continue
        children = pending.get(key)
        if children is None:
            children = pending[key] = expand(key)
        missing = [child for child in children if child not in table]
        if missing:
            stack.extend(missing)
            continue
        table.store(key, mex(table[child] for child in children))
        del pending[key]
        stack.pop()
    return table[root]


def _graph_table(
    graph: Graph, subtraction: SubtractionSet, memo: TranspositionTable[VertexSet] | None
) -> TranspositionTable[VertexSet]:
    table = memo if memo is not None else TranspositionTable[VertexSet]()
    table.bind((graph, subtraction))
    table.store(0, 0)
    return table


def grundy(
    pos: Position, subtraction: SubtractionSet, memo: TranspositionTable[VertexSet] | None = None
) -> GrundyValue:
    """Exact Grundy value of a position by memoized search over surviving-vertex bitsets.

    Args:
        pos: The position to evaluate.
        subtraction: The legal removal sizes.
        memo: Table keyed by live bitsets of `pos.graph`; it is bound to that graph on first use.

    Returns:
        The Grundy value, 0 for the empty position.
    """
    graph = pos.graph
    table = _graph_table(graph, subtraction, memo)

    def expand(live: VertexSet) -> list[VertexSet]:
        return [live & ~h for h in enumerate_removals(graph, live, subtraction)]

    value = _solve(pos.live, expand, table)
    logger.debug(f'Grundy value {value} for live set {pos.live:#x}, memo holds {len(table)} positions')
    return value


def options(pos: Position, subtraction: SubtractionSet) -> list[tuple[VertexSet, VertexSet]]:
    """Pairs (removed, remaining) for every legal move, ordered by the removed bitset."""
    return [(h, pos.live & ~h) for h in enumerate_removals(pos.graph, pos.live, subtraction)]


def winning_moves(
    pos: Position, subtraction: SubtractionSet, memo: TranspositionTable[VertexSet] | None = None
) -> list[VertexSet]:
    """Removals that leave a P-position; empty when `pos` is itself a P-position."""
    table = _graph_table(pos.graph, subtraction, memo)
    return [
        removed
        for removed, remaining in options(pos, subtraction)
        if grundy(Position(pos.graph, remaining), subtraction, table) == 0
    ]


def outcome(
    pos: Position, subtraction: SubtractionSet, memo: TranspositionTable[VertexSet] | None = None
) -> Outcome:
    return Outcome.of(grundy(pos, subtraction, memo))


def grundy_sum(parts: Iterable[Position], subtraction: SubtractionSet) -> GrundyValue:
    """Grundy value of a sum of games: the nim-sum of the parts' values."""
    return nim_sum(grundy(part, subtraction) for part in parts)


class StarSolver:
    """Grundy values of subdivided stars under one subtraction set, memoized on canonical branch multisets."""

    def __init__(self, subtraction: SubtractionSet, memo: TranspositionTable[SubdividedStar | None] | None = None):
        self.subtraction = subtraction
        self.memo = memo if memo is not None else TranspositionTable[SubdividedStar | None]()
        self.memo.bind(subtraction)
        self.memo.store(None, 0)

    def _expand(self, star: SubdividedStar | None) -> list[SubdividedStar | None]:
        if star is None:
            return []
        return [
            None if option.result is None else option.result.path_key
            for option in star_removals(star, self.subtraction)
        ]

    def grundy(self, star: SubdividedStar | None) -> GrundyValue:
        if star is None:
            return 0
        return _solve(star.path_key, self._expand, self.memo)

    def __len__(self) -> int:
        return len(self.memo)


class StarSolverRegistry:
    """Process-wide star solvers, one per subtraction set."""

    _solvers: ClassVar[dict[SubtractionSet, StarSolver]] = {}
    _lock: ClassVar[threading.Lock] = threading.Lock()

    @classmethod
    def get(cls, subtraction: SubtractionSet) -> StarSolver:
        with cls._lock:
            solver = cls._solvers.get(subtraction)
            if solver is None:
                solver = cls._solvers[subtraction] = StarSolver(subtraction)
                logger.debug(f'Created star solver for L={{{subtraction}}}')
            return solver

    @classmethod
    def clear(cls) -> None:
        with cls._lock:
            cls._solvers.clear()


def grundy_star(
    star: SubdividedStar, subtraction: SubtractionSet, memo: TranspositionTable[SubdividedStar | None] | None = None
) -> GrundyValue:
    """Grundy value of a subdivided star; agrees with `grundy` on the realized graph."""
    solver = StarSolverRegistry.get(subtraction) if memo is None else StarSolver(subtraction, memo)
    return solver.grundy(star)
