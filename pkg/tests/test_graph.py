import random
from itertools import combinations

import networkx as nx
import pytest

from src.const import EXAMPLE_GAME_GRAPH_SPEC, EXAMPLE_GAME_L
from src.exceptions import CapacityError, DomainError, PreconditionError
from src.graph import (
    EMPTY_GRAPH,
    AppendSpec,
    Graph,
    MoveKind,
    SubdividedStar,
    connected_subsets,
    enumerate_removals,
    is_connected,
    iter_bits,
    make_path,
    make_subdivided_star,
    read_star,
    star_removals,
    vertex_set,
)
from src.solver import SubtractionSet
from src.utils import parse_graph_spec

SMALL_GRAPHS = [
    make_path(6),
    make_subdivided_star([1, 2, 3]),
    make_subdivided_star([1, 1, 1, 1]),
    Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
    Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (1, 3)]),
    parse_graph_spec(EXAMPLE_GAME_GRAPH_SPEC).realize(),
]


ALL_SUBTRACTION_SETS = [
    SubtractionSet.of(*(c for c in range(1, 7) if mask >> (c - 1) & 1)) for mask in range(1, 1 << 6)
]


def _random_connected_graph(n: int, seed: int, extra: float = 0.25) -> Graph:
    rng = random.Random(seed)
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    edges |= {(a, b) for a, b in combinations(range(n), 2) if rng.random() < extra}
    return Graph.from_edges(n, sorted(edges))


def _to_nx(g: Graph, live: int | None = None) -> nx.Graph:
    live = g.full if live is None else live
    out = nx.Graph()
    out.add_nodes_from(iter_bits(live))
    out.add_edges_from((a, b) for a, b in g.edges() if live >> a & 1 and live >> b & 1)
    return out


def _bruteforce_connected(g: Graph, max_size: int) -> list[int]:
    found = []
    for size in range(1, max_size + 1):
        for vertices in combinations(range(g.n), size):
            if nx.is_connected(_to_nx(g).subgraph(vertices)):
                found.append(vertex_set(vertices))
    return sorted(found)


def test_vertex_set_round_trip() -> None:
    """Bitsets list their vertices in increasing order"""
    assert list(iter_bits(vertex_set([5, 0, 3]))) == [0, 3, 5]
    assert list(iter_bits(0)) == []


def test_graph_validation() -> None:
    """Disconnected, looped and oversized graphs are rejected"""
    with pytest.raises(PreconditionError):
        Graph.from_edges(3, [(0, 1)])
    with pytest.raises(PreconditionError):
        Graph.from_edges(2, [(0, 0), (0, 1)])
    with pytest.raises(PreconditionError):
        Graph(2, (0b10, 0b00))
    with pytest.raises(CapacityError):
        make_path(65)
    assert make_path(64).n == 64


def test_subdivided_star_canonical_form() -> None:
    """Branches are sorted descending and zero branches are dropped"""
    star = SubdividedStar.of(1, 0, 3, 2)
    assert star.branches == (3, 2, 1)
    assert star.size == 7
    assert str(star) == 'S(3,2,1)'
    assert SubdividedStar.simple(3, 2) == SubdividedStar.of(2, 1, 1, 1)


def test_path_key_merges_paths() -> None:
    """Two-branch stars are keyed as one-branch paths"""
    assert SubdividedStar.of(2, 3).path_key == SubdividedStar.of(5)
    assert SubdividedStar.of(4).path_key == SubdividedStar.of(4)
    assert SubdividedStar.of(1, 1, 1).path_key == SubdividedStar.of(1, 1, 1)
    assert SubdividedStar.of(2, 3).is_path
    assert not SubdividedStar.of(1, 1, 1).is_path


def test_extended_and_reduced() -> None:
    """Branch arithmetic keeps the canonical form"""
    star = SubdividedStar.of(3, 1, 1)
    assert star.extended(0, 4) == SubdividedStar.of(7, 1, 1)
    assert star.extended(3, 4) == SubdividedStar.of(4, 3, 1, 1)
    assert SubdividedStar.of(7, 5, 1).reduced(4) == SubdividedStar.of(3, 1, 1)
    assert SubdividedStar.of(4, 4).reduced(4) == SubdividedStar()


@pytest.mark.parametrize('branches', [[1, 2, 3], [1, 1, 1, 1], [4], [2, 2, 2], []])
def test_make_subdivided_star_is_a_star(branches: list[int]) -> None:
    """Realized stars are isomorphic to the same star built by networkx"""
    g = make_subdivided_star(branches)
    oracle = nx.Graph()
    oracle.add_node('c')
    for i, length in enumerate(branches):
        nx.add_path(oracle, ['c', *[(i, j) for j in range(length)]])
    assert nx.is_isomorphic(_to_nx(g), oracle), f'S{branches} realized wrongly'
    assert read_star(g) == SubdividedStar(tuple(branches))


def test_read_star_rejects_other_graphs() -> None:
    """Cycles and stars centered elsewhere are not read as stars"""
    with pytest.raises(DomainError):
        read_star(Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)]))
    with pytest.raises(DomainError):
        read_star(Graph.from_edges(5, [(0, 1), (1, 2), (1, 3), (1, 4)]))


def test_append_path() -> None:
    """Appending k vertices at the center adds a branch of length k"""
    spec = AppendSpec(make_subdivided_star([1, 1]), 0, 3)
    g = spec.realize()
    assert g.n == 6
    assert g.edge_count() == 5
    assert read_star(g) == SubdividedStar.of(3, 1, 1)
    assert spec.path_mask() == 0b111000
    assert spec.path_mask(1) == 0b001000


def test_append_to_empty_base_is_a_path() -> None:
    """The empty base takes no anchor and gives the plain path"""
    g = AppendSpec(EMPTY_GRAPH, None, 4).realize()
    assert nx.is_isomorphic(_to_nx(g), nx.path_graph(4))
    with pytest.raises(PreconditionError):
        AppendSpec(EMPTY_GRAPH, 0, 4)
    with pytest.raises(PreconditionError):
        AppendSpec(make_path(3), 3, 1)


def test_is_connected() -> None:
    """Connectivity of induced subgraphs, the empty set included"""
    g = make_path(5)
    assert is_connected(g, 0)
    assert is_connected(g, 0b01110)
    assert not is_connected(g, 0b10101)
    with pytest.raises(PreconditionError):
        is_connected(g, 1 << 5)


@pytest.mark.parametrize('g', SMALL_GRAPHS)
def test_connected_subsets_match_bruteforce(g: Graph) -> None:
    """Anchored enumeration yields every connected subset exactly once"""
    for max_size in (1, 3, g.n):
        found = list(connected_subsets(g, g.full, max_size))
        assert len(found) == len(set(found)), 'a subset was yielded twice'
        assert sorted(found) == _bruteforce_connected(g, max_size)


@pytest.mark.parametrize('g', SMALL_GRAPHS)
def test_enumerate_removals_match_bruteforce(g: Graph) -> None:
    """Legal removals are connected, sized in L, and leave a connected or empty remainder"""
    subtraction = SubtractionSet.of(1, 2, 4)
    expected = [
        h
        for h in _bruteforce_connected(g, g.n)
        if h.bit_count() in subtraction and (h == g.full or nx.is_connected(_to_nx(g, g.full & ~h)))
    ]
    assert list(enumerate_removals(g, g.full, subtraction)) == expected


def test_example_graph_removals() -> None:
    """The introductory graph under {1,2,4} never allows removing the cut vertex alone"""
    g = parse_graph_spec(EXAMPLE_GAME_GRAPH_SPEC).realize()
    removals = list(enumerate_removals(g, g.full, SubtractionSet(EXAMPLE_GAME_L)))
    assert 1 << 1 not in removals
    assert vertex_set([4, 5, 6]) not in removals, 'size 3 is not a legal removal size'
    assert all(h.bit_count() in EXAMPLE_GAME_L for h in removals)


def _connected_subsets_table(g: Graph) -> list[bool]:
    base = _to_nx(g)
    return [s == 0 or nx.is_connected(base.subgraph(iter_bits(s))) for s in range(1 << g.n)]


@pytest.mark.parametrize('n', [12, 11, 10, 8])
def test_enumerate_removals_match_subset_scan(n: int) -> None:
    """For every L within 1..6, legal removals equal a scan over all 2^n vertex subsets"""
    g = _random_connected_graph(n, seed=n)
    connected = _connected_subsets_table(g)
    for subtraction in ALL_SUBTRACTION_SETS:
        expected = [
            s
            for s in range(1, 1 << n)
            if s.bit_count() in subtraction and connected[s] and connected[g.full & ~s]
        ]
        assert list(enumerate_removals(g, g.full, subtraction)) == expected, f'L={subtraction}'


def test_example_graph_connectivity() -> None:
    """Taking the path 0-1-2-3 leaves the path 4-6-5"""
    g = parse_graph_spec(EXAMPLE_GAME_GRAPH_SPEC).realize()
    assert is_connected(g, vertex_set([4, 5, 6]))
    assert is_connected(g, vertex_set([0, 1, 2, 3]))
    assert not is_connected(g, vertex_set([0, 2, 3]))
    assert vertex_set([0, 1, 2, 3]) in list(enumerate_removals(g, g.full, SubtractionSet(EXAMPLE_GAME_L)))


@pytest.mark.parametrize(
    'branches',
    [(), (3,), (2, 3), (1, 1, 1), (3, 2, 1), (1, 1, 1, 2), (4, 1, 1)],
)
@pytest.mark.parametrize(
    'subtraction', [SubtractionSet.of(1, 2, 4), SubtractionSet.interval(3), SubtractionSet.of(2, 5)]
)
def test_star_removals_match_graph_removals(branches: tuple[int, ...], subtraction: SubtractionSet) -> None:
    """Star options correspond one to one, up to isomorphism, with removals on the realized graph"""
    star = SubdividedStar(branches)
    g = make_subdivided_star(star.branches)
    remainders = [_to_nx(g, g.full & ~h) for h in enumerate_removals(g, g.full, subtraction)]
    star_options = list(star_removals(star, subtraction))
    assert len(star_options) == len(remainders)
    for option in star_options:
        assert (option.kind == MoveKind.WHOLE) == (option.result is None)
        if option.result is None:
            candidate = nx.Graph()
        else:
            candidate = _to_nx(make_subdivided_star(option.result.branches))
        match = next((i for i, r in enumerate(remainders) if nx.is_isomorphic(r, candidate)), None)
        assert match is not None, f'{option} has no counterpart on the realized graph'
        remainders.pop(match)
