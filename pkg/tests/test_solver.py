import random
from itertools import combinations_with_replacement

import pytest

from src.const import EXAMPLE_GAME_GRAPH_SPEC, EXAMPLE_GAME_L
from src.exceptions import PreconditionError
from src.graph import EMPTY_GRAPH, Graph, SubdividedStar, make_path, make_subdivided_star
from src.solver import (
    Outcome,
    Position,
    StarSolver,
    StarSolverRegistry,
    SubtractionSet,
    TranspositionTable,
    grundy,
    grundy_star,
    grundy_sum,
    mex,
    nim_sum,
    options,
    outcome,
    winning_moves,
)
from src.utils import parse_graph_spec

SUBTRACTION_SETS = [
    SubtractionSet.of(1),
    SubtractionSet.of(1, 2, 4),
    SubtractionSet.interval(3),
    SubtractionSet.of(2, 4, 7),
    SubtractionSet.interval(2, 8),
]


def _solve(text: str, subtraction: SubtractionSet) -> int:
    return grundy(Position.whole(parse_graph_spec(text).realize()), subtraction)


@pytest.mark.parametrize(
    ('values', 'expected'),
    [([], 0), ([0], 1), ([1, 2], 0), ([0, 1, 3], 2), ([3, 0, 2, 1, 1], 4), ([0, 64], 1)],
)
def test_mex(values: list[int], expected: int) -> None:
    """Smallest nonnegative integer not in the set"""
    assert mex(values) == expected
    assert expected not in values
    assert all(v in values for v in range(expected))


def test_nim_sum() -> None:
    """Nim-sum is bitwise xor"""
    assert nim_sum([]) == 0
    assert nim_sum([1, 2, 3]) == 0
    assert nim_sum([5, 3]) == 6


def test_subtraction_set() -> None:
    """Sets are sorted, distinct, nonempty and within 1..64"""
    assert SubtractionSet.of(4, 1, 2, 2).values == (1, 2, 4)
    assert str(SubtractionSet.interval(2, 8)) == '1,2,8'
    assert SubtractionSet.interval(3).interval_bound == 3
    assert SubtractionSet.of(1, 2, 4).interval_bound is None
    assert 4 in SubtractionSet.of(1, 2, 4)
    assert 3 not in SubtractionSet.of(1, 2, 4)
    for bad in [(), (0, 1), (65,)]:
        with pytest.raises(PreconditionError):
            SubtractionSet(bad)


@pytest.mark.parametrize(
    ('text', 'subtraction', 'expected'),
    [
        ('path:4', SubtractionSet.interval(3), 0),
        ('path:5', SubtractionSet.interval(3), 1),
        ('edges:0-1', SubtractionSet.of(1), 0),
        ('path:1', SubtractionSet.of(1), 1),
        ('path:0', SubtractionSet.of(1), 0),
        ('sstar:1,1,1,2', SubtractionSet.of(1, 2, 4), 3),
        ('sstar:1,1,1,1', SubtractionSet.of(1, 2, 4), 0),
        ('sstar:3,3,1', SubtractionSet.of(1, 2, 4), 2),
        ('sstar:1,2,3', SubtractionSet.interval(3), 3),
        ('star:1^4', SubtractionSet.interval(2, 8), 0),
    ],
)
def test_known_values(text: str, subtraction: SubtractionSet, expected: int) -> None:
    """Values known by hand or from the published tables"""
    assert _solve(text, subtraction) == expected


@pytest.mark.parametrize('subtraction', SUBTRACTION_SETS)
def test_paths_play_like_heaps(subtraction: SubtractionSet) -> None:
    """A path of k vertices has the value of a heap of k counters"""
    heap = [0]
    for k in range(1, 13):
        heap.append(mex(heap[k - c] for c in subtraction if c <= k))
        assert _solve(f'path:{k}', subtraction) == heap[k], f'path:{k} under {subtraction}'


@pytest.mark.parametrize('subtraction', SUBTRACTION_SETS)
def test_value_bounded_by_size(subtraction: SubtractionSet) -> None:
    """No stored value exceeds the number of live vertices"""
    table = TranspositionTable[int]()
    g = parse_graph_spec('edges:0-1,1-2,2-3,1-4,4-6,5-6,1-5').realize()
    grundy(Position.whole(g), subtraction, table)
    assert len(table) > 1
    assert table.audit(lambda live: live.bit_count()) == []


@pytest.mark.parametrize('seed', range(6))
@pytest.mark.parametrize(
    'subtraction', [SubtractionSet.of(1, 2, 4), SubtractionSet.interval(3), SubtractionSet.of(1, 3)]
)
def test_values_are_mex_of_options(seed: int, subtraction: SubtractionSet) -> None:
    """Every smaller value is reachable from a position and its own value is not"""
    rng = random.Random(seed)
    n = 10 - seed % 4
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    edges |= {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.2}
    g = Graph.from_edges(n, sorted(edges))
    table = TranspositionTable[int]()
    grundy(Position.whole(g), subtraction, table)
    for live, value in table.items():
        reached = {grundy(Position(g, rest), subtraction, table) for _, rest in options(Position(g, live), subtraction)}
        assert value not in reached, f'{live:b} reaches its own value'
        assert set(range(value)) <= reached, f'{live:b} misses a smaller value'


def test_example_game_is_a_first_player_win() -> None:
    """Taking the path 0-1-2-3 leaves P3, a P-position under {1,2,4}"""
    g = parse_graph_spec(EXAMPLE_GAME_GRAPH_SPEC).realize()
    subtraction = SubtractionSet(EXAMPLE_GAME_L)
    position = Position.whole(g)
    assert grundy(position, subtraction) != 0
    assert outcome(position, subtraction) == Outcome.N
    assert 0b1111 in winning_moves(position, subtraction)


@pytest.mark.parametrize('text', ['path:5', 'sstar:1,2,3', 'edges:0-1,1-2,2-0,2-3'])
def test_sum_of_equal_games_is_zero(text: str) -> None:
    """G + G is a P-position"""
    position = Position.whole(parse_graph_spec(text).realize())
    subtraction = SubtractionSet.of(1, 2, 4)
    assert grundy_sum([position, position], subtraction) == 0
    assert Outcome.of(grundy_sum([position, position], subtraction)) == Outcome.P


def test_positions_must_be_connected() -> None:
    """A live set that splits the graph is not a position"""
    g = make_path(5)
    with pytest.raises(PreconditionError):
        Position(g, 0b10101)
    assert Position(g, 0).size == 0
    assert grundy(Position(g, 0), SubtractionSet.of(1)) == 0


def test_options_and_winning_moves() -> None:
    """Winning moves are exactly the options of value zero"""
    subtraction = SubtractionSet.of(1, 2, 4)
    g = make_subdivided_star([1, 1, 1, 2])
    position = Position.whole(g)
    assert outcome(position, subtraction) == Outcome.N
    moves = winning_moves(position, subtraction)
    assert moves
    for removed, remaining in options(position, subtraction):
        value = grundy(Position(g, remaining), subtraction)
        assert (removed in moves) == (value == 0)
    assert [h for h, _ in options(position, subtraction)] == sorted(h for h, _ in options(position, subtraction))

    p_position = Position.whole(make_path(3))
    assert outcome(p_position, subtraction) == Outcome.P
    assert winning_moves(p_position, subtraction) == []


def test_transposition_table_writes() -> None:
    """Equal rewrites are accepted, conflicting ones and foreign scopes are refused"""
    table = TranspositionTable[str]()
    table.bind('scope')
    table.bind('scope')
    table.store('a', 1)
    table.store('a', 1)
    assert table['a'] == 1
    assert 'a' in table
    assert table.get('b') is None
    with pytest.raises(PreconditionError):
        table.store('a', 2)
    with pytest.raises(PreconditionError):
        table.bind('other')


def test_table_is_bound_to_one_graph() -> None:
    """Reusing a memo for another graph is refused"""
    table = TranspositionTable[int]()
    subtraction = SubtractionSet.of(1, 2)
    grundy(Position.whole(make_path(4)), subtraction, table)
    grundy(Position(make_path(4), 0b0011), subtraction, table)
    with pytest.raises(PreconditionError):
        grundy(Position.whole(make_path(5)), subtraction, table)


def _stars(max_branches: int, max_len: int, max_size: int) -> list[SubdividedStar]:
    stars = []
    for t in range(max_branches + 1):
        for lengths in combinations_with_replacement(range(1, max_len + 1), t):
            star = SubdividedStar(lengths)
            if star.size <= max_size:
                stars.append(star)
    return stars


@pytest.mark.parametrize(
    'subtraction',
    [*SUBTRACTION_SETS, SubtractionSet.interval(2), SubtractionSet.interval(4), SubtractionSet.of(1, 3)],
)
def test_star_solver_agrees_with_graph_solver(subtraction: SubtractionSet) -> None:
    """The star solver and the bitset search give the same values on stars with up to five branches"""
    solver = StarSolver(subtraction)
    for star in _stars(5, 5, 14):
        g = make_subdivided_star(star.branches)
        assert solver.grundy(star) == grundy(Position.whole(g), subtraction), f'{star} under {subtraction}'
    assert solver.memo.audit(lambda s: 0 if s is None else s.size) == []


def test_star_solver_registry() -> None:
    """One shared solver per subtraction set; the empty graph is worth 0"""
    StarSolverRegistry.clear()
    subtraction = SubtractionSet.of(1, 2, 4)
    assert StarSolverRegistry.get(subtraction) is StarSolverRegistry.get(subtraction)
    assert StarSolverRegistry.get(subtraction) is not StarSolverRegistry.get(SubtractionSet.of(1, 2))
    assert StarSolverRegistry.get(subtraction).grundy(None) == 0
    assert grundy_star(SubdividedStar(), SubtractionSet.of(1)) == 1
    assert grundy(Position.whole(EMPTY_GRAPH), subtraction) == 0


def test_isomorphic_paths_share_memo_entries() -> None:
    """S(a,b) and S(a+b) are the same memo entry"""
    solver = StarSolver(SubtractionSet.of(1, 2, 4))
    solver.grundy(SubdividedStar.of(2, 3))
    size = len(solver)
    solver.grundy(SubdividedStar.of(5))
    solver.grundy(SubdividedStar.of(1, 4))
    assert len(solver) == size
    assert SubdividedStar.of(2, 3) not in solver.memo


def test_graph_equality_keys() -> None:
    """Graphs compare by structure so they can scope memo tables"""
    assert Graph.from_edges(3, [(0, 1), (1, 2)]) == make_path(3)
