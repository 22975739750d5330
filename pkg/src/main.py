from __future__ import annotations

import logging
import time
from typing import TYPE_CHECKING, Any

import click
import polars as pl
from pydantic import ValidationError

from .closed_forms import s1kl_table, simple_star_table
from .const import CSG_LOGGER_NAME, EXIT_CAPACITY, EXIT_MISMATCH, EXIT_USAGE, MAX_VERTICES, REPLAY_PERIODS
from .exceptions import (
    CapacityError,
    CertificationError,
    DomainError,
    PeriodNotFoundError,
    PreconditionError,
    SpecParseError,
    UnknownFamilyError,
)
from .harness import resolve_suite, run_suite
from .input_model import CertifyInput, SequenceInput, SolveInput, TableInput, VerifyInput
from .periodicity import appended_sequence, certify_period, detect_period, format_sequence, replay_certificate
from .solver import Outcome, Position, grundy, grundy_star, winning_moves
from .utils import echo_json, format_table, realize_graph_spec, render_vertex_set, set_debug

if TYPE_CHECKING:
    from collections.abc import Callable

logger = logging.getLogger(CSG_LOGGER_NAME)

FORMAT_CHOICE = click.Choice(['text', 'csv', 'json'])


class CSGGroup(click.Group):
    """Maps toolkit errors to exit codes: 2 for bad input, 3 for capacity."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except (CapacityError, CertificationError) as e:
            logger.debug('Capacity exceeded', exc_info=True)
            click.echo(f'Error: {e}', err=True)
            ctx.exit(EXIT_CAPACITY)
        except (SpecParseError, UnknownFamilyError, DomainError, PreconditionError) as e:
            logger.debug('Invalid input', exc_info=True)
            click.echo(f'Error: {e}', err=True)
            ctx.exit(EXIT_USAGE)
        except ValidationError as e:
            click.echo(f'Error: invalid options\n{e}', err=True)
            ctx.exit(EXIT_USAGE)


def _echo_frame(frame: pl.DataFrame, fmt: str, text: Callable[[], str]) -> None:
    if fmt == 'csv':
        click.echo(frame.write_csv(), nl=False)
    elif fmt == 'json':
        echo_json(frame.to_dicts())
    else:
        click.echo(text())


@click.group(cls=CSGGroup)
@click.option('--debug', is_flag=True, help='Log debug messages from the solver and the harness.')
def cli(debug: bool) -> None:
    """Connected subtraction games: solve positions, compute sequences, certify periods, run verifications."""
    set_debug(debug)


@cli.command()
@click.argument('graph')
@click.option('--L', 'subtraction', required=True, help='Subtraction set, e.g. 1,2,4 or I:4 or I:8+20.')
@click.option('--format', 'fmt', type=FORMAT_CHOICE, default='text', show_default=True)
@click.option('--moves', is_flag=True, help='List the removals that leave a P-position.')
@click.option('--timing', is_flag=True, help='Report the real solve time in millis.')
def solve(graph: str, subtraction: str, fmt: str, moves: bool, timing: bool) -> None:
    """Grundy value and outcome of a graph given in the mini-language."""
    solve_input = SolveInput(graph=graph, subtraction=subtraction, format=fmt, moves=moves, timing=timing)
    spec = solve_input.graph_spec()
    subtraction_set = solve_input.subtraction_set()
    g = realize_graph_spec(spec)

    started = time.perf_counter()
    star = spec.star()
    position = Position.whole(g)
    value = grundy_star(star, subtraction_set) if star is not None else grundy(position, subtraction_set)
    winning = winning_moves(position, subtraction_set) if moves else []
    millis = round((time.perf_counter() - started) * 1000) if timing else 0
    logger.debug(f'Solved {spec} with |V|={g.n} under L={{{subtraction_set}}} in {millis} ms')

    result: dict[str, Any] = {
        'input': spec.render(),
        'L': str(subtraction_set),
        'grundy': value,
        'outcome': Outcome.of(value).value,
        'millis': millis,
    }
    if moves:
        result['moves'] = [render_vertex_set(h) for h in winning]
    if fmt == 'json':
        echo_json(result)
    elif fmt == 'csv':
        row = {**result, 'moves': ' '.join(result['moves'])} if moves else result
        click.echo(pl.DataFrame([row]).write_csv(), nl=False)
    else:
        click.echo(f'{result["input"]} L={result["L"]}: grundy {value}, {result["outcome"]}-position')
        for h in result.get('moves', []):
            click.echo(f'winning move: remove {h}')


@cli.command()
@click.argument('family')
@click.option('--L', 'subtraction', required=True, help='Subtraction set, e.g. 1,2,4 or I:4 or I:8+20.')
@click.option('--kmax', 'k_max', type=int, default=40, show_default=True, help='Largest appended path length.')
@click.option('--format', 'fmt', type=FORMAT_CHOICE, default='text', show_default=True)
def sequence(family: str, subtraction: str, k_max: int, fmt: str) -> None:
    """Values f(k) of the appended family G.u.k for k = 0..kmax, with the detected period."""
    seq_input = SequenceInput(family=family, subtraction=subtraction, k_max=k_max, format=fmt)
    fam = seq_input.family_spec()
    subtraction_set = seq_input.subtraction_set()
    values = appended_sequence(fam.base_graph, fam.anchor, subtraction_set, seq_input.k_max)
    try:
        detected: str | None = format_sequence(detect_period(values, subtraction_set.max))
    except PeriodNotFoundError as e:
        logger.info(f'No period detected for {fam}: {e}')
        detected = None

    if fmt == 'json':
        echo_json({'family': str(fam), 'L': str(subtraction_set), 'values': values, 'sequence': detected})
    elif fmt == 'csv':
        click.echo(pl.DataFrame({'k': list(range(len(values))), 'value': values}).write_csv(), nl=False)
    else:
        click.echo(f'{fam} L={subtraction_set}: {" ".join(map(str, values))}')
        click.echo(detected if detected is not None else 'no period detected')


@cli.command()
@click.argument('family')
@click.option('--L', 'subtraction', required=True, help='Subtraction set, e.g. 1,2,4 or I:4 or I:8+20.')
@click.option(
    '--bound', type=int, default=None, help='Largest k the repeated-state search may reach.'
)
@click.option('--format', 'fmt', type=FORMAT_CHOICE, default='text', show_default=True)
@click.pass_context
def certify(ctx: click.Context, family: str, subtraction: str, bound: int | None, fmt: str) -> None:
    """Certify the eventual period of G.u.k and replay the certificate against exact values."""
    cert_input = CertifyInput(family=family, subtraction=subtraction, bound=bound, format=fmt)
    fam = cert_input.family_spec()
    subtraction_set = cert_input.subtraction_set()
    base = fam.base_graph
    cert = certify_period(base, fam.anchor, subtraction_set, subject=str(fam), k_bound=cert_input.bound)
    k_end = min(cert.start + REPLAY_PERIODS * cert.period, MAX_VERTICES - base.n)
    replayed = replay_certificate(cert, k_end)
    replay_ok = replayed == appended_sequence(base, fam.anchor, subtraction_set, k_end)

    if fmt == 'json':
        echo_json({'certificate': cert.model_dump(mode='json'), 'replay_k_end': k_end, 'replay_ok': replay_ok})
    elif fmt == 'csv':
        click.echo(pl.DataFrame({'k': list(range(len(replayed))), 'value': replayed}).write_csv(), nl=False)
    else:
        click.echo(cert.to_text())
        click.echo(f'{fam} L={subtraction_set}: {cert.sequence()}')
        click.echo(f'replay through k={k_end}: {"ok" if replay_ok else "MISMATCH"}')
    if not replay_ok:
        ctx.exit(EXIT_MISMATCH)


@cli.command()
@click.argument('kind', type=click.Choice(['S1tk', 'S1kl']))
@click.option('--N', 'n', type=int, required=True, help='Subtraction set I_N = {1..N}.')
@click.option('--rows', 'row_max', type=int, default=None, help='Last row index k.')
@click.option('--cols', 'col_max', type=int, default=None, help='Last column index (t for S1tk, l for S1kl).')
@click.option('--format', 'fmt', type=FORMAT_CHOICE, default='text', show_default=True)
def table(kind: str, n: int, row_max: int | None, col_max: int | None, fmt: str) -> None:
    """Grundy value tables: S(1^t,k) with rows k and columns t, or S(1,k,l) with rows k and columns l."""
    table_input = TableInput(kind=kind, n=n, row_max=row_max, col_max=col_max, format=fmt)
    rows, cols = table_input.rows, table_input.cols
    if table_input.kind == 'S1tk':
        grid = simple_star_table(table_input.n, cols, rows)
    else:
        grid = s1kl_table(table_input.n, rows, cols)
    headers = ['k', *map(str, range(cols + 1))]
    frame = pl.DataFrame([[k, *row] for k, row in enumerate(grid)], schema=headers, orient='row')
    _echo_frame(frame, fmt, lambda: format_table(headers, frame.rows()))


@cli.command()
@click.argument('suite', default='all')
@click.option('--jobs', type=int, default=1, show_default=True, help='Worker processes for independent checks.')
@click.option('--timing', is_flag=True, help='Report real millis per check.')
@click.pass_context
def verify(ctx: click.Context, suite: str, jobs: int, timing: bool) -> None:
    """Run verification checks; one line per check: id, pass/fail, instance count, millis."""
    verify_input = VerifyInput(suite=suite, jobs=jobs, timing=timing)
    reports = run_suite(resolve_suite(verify_input.suite), verify_input.jobs)
    for report in reports:
        shown = report if verify_input.timing else report.model_copy(update={'millis': 0})
        click.echo(shown.machine_line())
        if (mismatch := report.minimal_mismatch) is not None:
            click.echo(f'  minimal mismatch: {mismatch.instance}: expected {mismatch.expected}, got {mismatch.got}')
        for note in report.notes:
            click.echo(f'  note: {note}')
    if not all(report.passed for report in reports):
        ctx.exit(EXIT_MISMATCH)
