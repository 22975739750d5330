from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from .const import MAX_VERTICES
from .solver import SubtractionSet
from .utils import FamilySpec, GraphSpec, parse_family_spec, parse_graph_spec, parse_subtraction_set

OutputFormat = Literal['text', 'csv', 'json']


class CommandInput(BaseModel):
    subtraction: str = Field(
        ...,
        description='Legal removal sizes: a comma list such as 1,2,4, an interval I:4 for {1..4}, or I:8+20.',
        title='Subtraction set (L-spec)',
    )
    format: OutputFormat = Field('text', description='Output format: text, csv or json.', title='Output format')

    def subtraction_set(self) -> SubtractionSet:
        return parse_subtraction_set(self.subtraction)


class SolveInput(CommandInput):
    graph: str = Field(
        ...,
        description='Graph in the mini-language, e.g. path:7, star:1^4, sstar:1,2,3, edges:0-1,1-2 or '
        'append(sstar:1,1,u=0,k=3).',
        title='Graph spec',
    )
    moves: bool = Field(False, description='Also list the removals that leave a P-position.', title='Winning moves')
    timing: bool = Field(False, description='Report the real solve time instead of 0 millis.', title='Timing')

    def graph_spec(self) -> GraphSpec:
        return parse_graph_spec(self.graph)


class SequenceInput(CommandInput):
    family: str = Field(
        ...,
        description='Appended family: `path`, or a graph spec with an optional anchor such as star:1^3@center '
        'or edges:0-1,1-2@1 (anchor 0 by default).',
        title='Family spec',
    )
    k_max: int = Field(
        40, ge=0, le=MAX_VERTICES, description='Largest appended path length k to evaluate.', title='Largest k'
    )

    def family_spec(self) -> FamilySpec:
        return parse_family_spec(self.family)


class CertifyInput(CommandInput):
    family: str = Field(..., description='Appended family, as for the sequence command.', title='Family spec')
    bound: int | None = Field(
        None,
        ge=1,
        description='Largest k the repeated-state search may reach before certification gives up.',
        title='Search bound',
    )

    def family_spec(self) -> FamilySpec:
        return parse_family_spec(self.family)


class TableInput(BaseModel):
    kind: Literal['S1tk', 'S1kl'] = Field(
        ..., description='S1tk: rows k, columns t of S(1^t,k). S1kl: rows k, columns l of S(1,k,l).', title='Table'
    )
    n: int = Field(..., ge=1, le=MAX_VERTICES, description='The subtraction set is I_N = {1..N}.', title='N')
    row_max: int | None = Field(None, ge=0, description='Last row index; 8 for S1tk, 2N+1 for S1kl.', title='Rows')
    col_max: int | None = Field(
        None, ge=0, description='Last column index; 10 for S1tk, 2N+1 for S1kl.', title='Columns'
    )
    format: OutputFormat = Field('text', description='Output format: text, csv or json.', title='Output format')

    @property
    def rows(self) -> int:
        if self.row_max is not None:
            return self.row_max
        return 8 if self.kind == 'S1tk' else 2 * self.n + 1

    @property
    def cols(self) -> int:
        if self.col_max is not None:
            return self.col_max
        return 10 if self.kind == 'S1tk' else 2 * self.n + 1


class VerifyInput(BaseModel):
    suite: str = Field(
        'all', description='`all` for the default suite, or a comma list of check ids.', title='Suite'
    )
    jobs: int = Field(1, ge=1, description='Worker processes used to run independent checks.', title='Jobs')
    timing: bool = Field(False, description='Report real millis instead of 0.', title='Timing')
