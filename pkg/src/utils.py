from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

import click

from .const import CSG_LOGGER_NAME
from .exceptions import PreconditionError, SpecParseError
from .graph import (
    EMPTY_GRAPH,
    AppendSpec,
    Graph,
    SubdividedStar,
    make_path,
    make_subdivided_star,
    vertex_set,
)
from .solver import SubtractionSet

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

logger = logging.getLogger(CSG_LOGGER_NAME)

_INT = r'(?:0|[1-9]\d*)'
INTERVAL_PATTERN = re.compile(rf'^I:({_INT})((?:\+{_INT})*)$')
LIST_PATTERN = re.compile(rf'^{_INT}(?:,{_INT})*$')
PATH_PATTERN = re.compile(rf'^path:({_INT})$')
STAR_PATTERN = re.compile(rf'^star:1\^({_INT})$')
SSTAR_PATTERN = re.compile(rf'^sstar:({_INT}(?:\^{_INT})?(?:,{_INT}(?:\^{_INT})?)*)?$')
EDGES_PATTERN = re.compile(rf'^edges:({_INT}-{_INT}(?:,{_INT}-{_INT})*)$')
# Lazy body anchored at the closing paren, so the outermost u= and k= are the ones matched.
APPEND_PATTERN = re.compile(rf'^append\((.+?)(?:,u=({_INT}))?,k=({_INT})\)$')
FAMILY_ANCHOR_PATTERN = re.compile(rf'^(.+)@(center|{_INT})$')


def set_debug(debug: bool) -> None:
    """Lower the toolkit logger to DEBUG when debug output is requested."""
    if debug:
        logging.getLogger(CSG_LOGGER_NAME).setLevel(logging.DEBUG)
        logger.debug('Debug mode is enabled')


def parse_subtraction_set(text: str) -> SubtractionSet:
    """
    Parse an L-spec.

    Accepted forms are a comma list `1,2,4`, an interval `I:4` for I_N and an interval with extra
    sizes `I:8+20` for I_N joined with {M}.

    Args:
        text: The L-spec.

    Returns:
        The parsed subtraction set.
    """
    text = text.strip()
    try:
        if match := INTERVAL_PATTERN.match(text):
            extra = [int(v) for v in match.group(2).split('+') if v]
            return SubtractionSet.interval(int(match.group(1)), *extra)
        if LIST_PATTERN.match(text):
            return SubtractionSet(tuple(int(v) for v in text.split(',')))
    except PreconditionError as e:
        msg = f'Invalid subtraction set {text!r}: {e}'
        logger.exception(msg)
        raise SpecParseError(msg) from e
    raise SpecParseError(f'Cannot parse subtraction set {text!r}, expected e.g. 1,2,4 or I:4 or I:8+20')


@dataclass(frozen=True, slots=True)
class GraphSpec:
    """A parsed graph mini-language expression; `render` reproduces the source text."""

    def realize(self) -> Graph:
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError

    def star(self) -> SubdividedStar | None:
        """The subdivided star this spec denotes when centered at vertex 0, if any."""
        return None

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True, slots=True)
class PathSpec(GraphSpec):
    k: int

    def realize(self) -> Graph:
        return make_path(self.k)

    def render(self) -> str:
        return f'path:{self.k}'

    def star(self) -> SubdividedStar | None:
        return SubdividedStar.of(self.k - 1) if self.k else None


@dataclass(frozen=True, slots=True)
class SimpleStarSpec(GraphSpec):
    t: int

    def realize(self) -> Graph:
        return make_subdivided_star([1] * self.t)

    def render(self) -> str:
        return f'star:1^{self.t}'

    def star(self) -> SubdividedStar | None:
        return SubdividedStar.simple(self.t)


@dataclass(frozen=True, slots=True)
class SubdividedStarSpec(GraphSpec):
    # Raw tokens, `a` or `a^c`, kept for an exact render.
    tokens: tuple[str, ...]

    @property
    def branches(self) -> list[int]:
        out: list[int] = []
        for token in self.tokens:
            length, _, count = token.partition('^')
            out.extend([int(length)] * (int(count) if count else 1))
        return out

    def realize(self) -> Graph:
        return make_subdivided_star(self.branches)

    def render(self) -> str:
        return f'sstar:{",".join(self.tokens)}'

    def star(self) -> SubdividedStar | None:
        return SubdividedStar(tuple(self.branches))


@dataclass(frozen=True, slots=True)
class EdgesSpec(GraphSpec):
    edges: tuple[tuple[int, int], ...]

    def realize(self) -> Graph:
        n = 1 + max(max(edge) for edge in self.edges)
        return Graph.from_edges(n, self.edges)

    def render(self) -> str:
        return 'edges:' + ','.join(f'{a}-{b}' for a, b in self.edges)


@dataclass(frozen=True, slots=True)
class AppendGraphSpec(GraphSpec):
    base: GraphSpec
    anchor: int | None
    k: int

    def append_spec(self) -> AppendSpec:
        return AppendSpec(self.base.realize(), self.anchor, self.k)

    def realize(self) -> Graph:
        return self.append_spec().realize()

    def render(self) -> str:
        anchor = '' if self.anchor is None else f',u={self.anchor}'
        return f'append({self.base.render()}{anchor},k={self.k})'

    def star(self) -> SubdividedStar | None:
        base = self.base.star()
        if self.anchor is None:
            return SubdividedStar.of(self.k - 1) if self.k else None
        if base is None or self.anchor != 0:
            return None
        return SubdividedStar((*base.branches, self.k))


def parse_graph_spec(text: str) -> GraphSpec:
    """Parse the graph mini-language: `path:7`, `star:1^4`, `sstar:1,2,3`, `edges:0-1,1-2`, `append(...)`."""
    text = text.strip()
    if match := PATH_PATTERN.match(text):
        return PathSpec(int(match.group(1)))
    if match := STAR_PATTERN.match(text):
        return SimpleStarSpec(int(match.group(1)))
    if match := SSTAR_PATTERN.match(text):
        body = match.group(1)
        return SubdividedStarSpec(tuple(body.split(',')) if body else ())
    if match := EDGES_PATTERN.match(text):
        pairs = (pair.split('-') for pair in match.group(1).split(','))
        return EdgesSpec(tuple((int(a), int(b)) for a, b in pairs))
    if match := APPEND_PATTERN.match(text):
        base = parse_graph_spec(match.group(1))
        anchor = None if match.group(2) is None else int(match.group(2))
        return AppendGraphSpec(base, anchor, int(match.group(3)))
    raise SpecParseError(f'Cannot parse graph spec {text!r}')


def realize_graph_spec(spec: GraphSpec) -> Graph:
    """Realize a parsed spec, reporting invalid shapes as parse errors and keeping capacity errors."""
    try:
        return spec.realize()
    except PreconditionError as e:
        msg = f'Graph spec {spec.render()!r} is not a valid game graph: {e}'
        logger.exception(msg)
        raise SpecParseError(msg) from e


@dataclass(frozen=True, slots=True)
class FamilySpec:
    """A family G.u.k over k: `path` is the empty base, otherwise a graph spec with an anchor (default 0)."""

    base: GraphSpec | None
    anchor: int | None
    text: str

    @property
    def base_graph(self) -> Graph:
        return EMPTY_GRAPH if self.base is None else realize_graph_spec(self.base)

    def member(self, k: int) -> AppendSpec:
        return AppendSpec(self.base_graph, self.anchor, k)

    def __str__(self) -> str:
        return self.text


def parse_family_spec(text: str) -> FamilySpec:
    text = text.strip()
    if text == 'path':
        return FamilySpec(None, None, text)
    anchor = 0
    body = text
    if match := FAMILY_ANCHOR_PATTERN.match(text):
        body = match.group(1)
        anchor = 0 if match.group(2) == 'center' else int(match.group(2))
    base = parse_graph_spec(body)
    graph = realize_graph_spec(base)
    if not 0 <= anchor < graph.n:
        raise SpecParseError(f'Anchor {anchor} is not a vertex of {body!r}')
    return FamilySpec(base, anchor, text)


def render_vertex_set(bits: int) -> str:
    return '{' + ','.join(str(v) for v in range(bits.bit_length()) if bits >> v & 1) + '}'


def parse_vertex_set(text: str) -> int:
    body = text.strip().removeprefix('{').removesuffix('}')
    return vertex_set(int(v) for v in body.split(',') if v)


def render_star(star: SubdividedStar) -> str:
    return 'sstar:' + ','.join(map(str, star.branches))


def render_graph(g: Graph) -> str:
    """Mini-language text for an arbitrary realized graph; paths are used for graphs without edges."""
    if g.n <= 1:
        return f'path:{g.n}'
    return 'edges:' + ','.join(f'{a}-{b}' for a, b in g.edges())


def format_table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """Left-aligned text table with a dashed rule under the header."""
    cells = [[str(cell) for cell in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    header_line = ' '.join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()
    body = [' '.join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in cells]
    return '\n'.join([header_line, '-' * len(header_line), *body])


def echo_json(data: object) -> None:
    """Echo JSON with keys in insertion order."""
    click.echo(json.dumps(data, ensure_ascii=False, indent=2))
