import logging

import pytest

from src.const import CSG_LOGGER_NAME
from src.exceptions import CapacityError, SpecParseError
from src.graph import EMPTY_GRAPH, SubdividedStar, make_path
from src.solver import SubtractionSet
from src.utils import (
    format_table,
    parse_family_spec,
    parse_graph_spec,
    parse_subtraction_set,
    parse_vertex_set,
    realize_graph_spec,
    render_graph,
    render_star,
    render_vertex_set,
)


@pytest.mark.parametrize(
    ('text', 'expected'),
    [
        ('1,2,4', (1, 2, 4)),
        ('4,2,1', (1, 2, 4)),
        ('I:4', (1, 2, 3, 4)),
        ('I:8+20', (1, 2, 3, 4, 5, 6, 7, 8, 20)),
        ('I:2+8', (1, 2, 8)),
    ],
)
def test_parse_subtraction_set(text: str, expected: tuple[int, ...]) -> None:
    """Comma lists, intervals and intervals with extra sizes"""
    assert parse_subtraction_set(text).values == expected


@pytest.mark.parametrize('text', ['', 'I:', '1,,2', '0,1', 'I:0', '1;2', 'I:65', '01,2'])
def test_parse_subtraction_set_rejects(text: str) -> None:
    """Malformed or out-of-range sets are parse errors"""
    with pytest.raises(SpecParseError):
        parse_subtraction_set(text)


@pytest.mark.parametrize(
    'text',
    [
        'path:7',
        'path:0',
        'star:1^4',
        'sstar:1,2,3',
        'sstar:1^3,2',
        'sstar:',
        'edges:0-1,1-2,2-3,1-4,4-6,5-6,1-5',
        'append(sstar:1,1,u=0,k=3)',
        'append(path:0,k=5)',
        'append(append(path:3,u=1,k=2),u=4,k=1)',
        'append(edges:0-1,1-2,2-0,u=2,k=4)',
    ],
)
def test_graph_spec_render_is_exact(text: str) -> None:
    """Rendering a parsed spec reproduces the source text"""
    assert parse_graph_spec(text).render() == text


@pytest.mark.parametrize('text', ['path:', 'path:-1', 'star:2^3', 'sstar:1,', 'edges:', 'edges:0-1,', 'graph:3'])
def test_graph_spec_rejects(text: str) -> None:
    """Unknown forms are parse errors"""
    with pytest.raises(SpecParseError):
        parse_graph_spec(text)


def test_graph_spec_realize() -> None:
    """Specs realize to the graphs they name and expose their star form"""
    spec = parse_graph_spec('append(sstar:1^2,u=0,k=3)')
    assert spec.realize().n == 6
    assert spec.star() == SubdividedStar.of(3, 1, 1)
    assert parse_graph_spec('path:5').star() == SubdividedStar.of(4)
    assert parse_graph_spec('path:0').star() is None
    assert parse_graph_spec('append(path:0,k=3)').star() == SubdividedStar.of(2)
    assert parse_graph_spec('append(path:3,u=1,k=1)').star() is None
    assert parse_graph_spec('edges:0-1').star() is None


def test_realize_graph_spec_errors() -> None:
    """Invalid shapes are parse errors; oversized graphs keep the capacity error"""
    with pytest.raises(SpecParseError):
        realize_graph_spec(parse_graph_spec('edges:0-1,2-3'))
    with pytest.raises(SpecParseError):
        realize_graph_spec(parse_graph_spec('append(path:3,u=3,k=1)'))
    with pytest.raises(CapacityError):
        realize_graph_spec(parse_graph_spec('path:65'))


def test_wrapped_errors_are_logged(caplog: pytest.LogCaptureFixture) -> None:
    """Parse errors built from invalid values are logged with their cause"""
    with caplog.at_level(logging.ERROR, logger=CSG_LOGGER_NAME), pytest.raises(SpecParseError):
        parse_subtraction_set('I:65')
    with caplog.at_level(logging.ERROR, logger=CSG_LOGGER_NAME), pytest.raises(SpecParseError):
        realize_graph_spec(parse_graph_spec('edges:0-1,2-3'))
    errors = [r for r in caplog.records if r.levelno == logging.ERROR]
    messages = [r.getMessage() for r in errors]
    assert messages[0].startswith("Invalid subtraction set 'I:65'")
    assert messages[1].startswith("Graph spec 'edges:0-1,2-3' is not a valid game graph")
    assert all(r.exc_info is not None for r in errors)


def test_family_spec() -> None:
    """`path` is the empty base; anchors default to vertex 0"""
    path = parse_family_spec('path')
    assert path.base_graph == EMPTY_GRAPH
    assert path.anchor is None
    assert path.member(4).realize().n == 4

    star = parse_family_spec('star:1^3@center')
    assert star.anchor == 0
    assert star.member(2).realize().n == 6
    assert parse_family_spec('sstar:1,1').anchor == 0
    assert parse_family_spec('edges:0-1,1-2@1').anchor == 1
    with pytest.raises(SpecParseError):
        parse_family_spec('path:3@3')


def test_vertex_sets_and_renderers() -> None:
    """Vertex sets and realized graphs print in the mini-language"""
    assert render_vertex_set(0b1011) == '{0,1,3}'
    assert parse_vertex_set('{0,1,3}') == 0b1011
    assert parse_vertex_set('{}') == 0
    assert render_star(SubdividedStar.of(1, 2)) == 'sstar:2,1'
    assert render_graph(make_path(1)) == 'path:1'
    assert render_graph(make_path(3)) == 'edges:0-1,1-2'
    assert parse_graph_spec(render_graph(make_path(3))).realize() == make_path(3)


def test_format_table() -> None:
    """Columns are padded to their widest cell"""
    text = format_table(['k', '0', '10'], [(0, 1, 12), (10, 2, 3)])
    assert text.splitlines() == ['k  0 10', '-------', '0  1 12', '10 2 3']


def test_subtraction_set_str_round_trip() -> None:
    """The printed form of a set parses back to it"""
    subtraction = SubtractionSet.interval(3, 10)
    assert parse_subtraction_set(str(subtraction)) == subtraction
