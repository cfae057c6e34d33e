import functools
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Optional

import click
import pandas as pd
import structlog

from polarize.cli.report import (
    EXIT_USAGE,
    RunReport,
    build_report,
    checks_table,
    stderr_logging,
    tolerance_overrides,
)
from polarize.csb.verifier import verify_csb_proof
from polarize.explorer.conjecture import explore_conjecture
from polarize.explorer.search import max_abs_product
from polarize.general import configuration as general_configuration
from polarize.general.schema import Check, CVector
from polarize.norms.generation import FAMILIES, NormFamily, random_norm
from polarize.norms.schema import dump_descriptor, parse_descriptor
from polarize.product.polarization import polarization_product
from polarize.reproduction import reproduce
from polarize.utils import (
    derive_seed,
    dump_report,
    parse_json_argument,
    thread_count,
    write_report,
)

FAMILY_NAMES = [family.value for family in FAMILIES]

# (results, checks, summary) of one command
Outcome = tuple[list[Any], list[Check], dict[str, Any]]


def common_options(function: Callable) -> Callable:
    options = [
        click.option(
            '--tol',
            'tolerances',
            multiple=True,
            metavar='SECTION.FIELD=VALUE',
            help='Override a tolerance, e.g. csb.final_bound_tol=1e-6.',
        ),
        click.option('--verbose', is_flag=True, help='Log at debug level.'),
        click.option(
            '--deterministic',
            is_flag=True,
            help='Leave the timestamp out of the report.',
        ),
        click.option(
            '--pretty', is_flag=True, help='Print a summary table to stderr.'
        ),
        click.option(
            '--output',
            type=click.Path(dir_okay=False, path_type=Path),
            help='Also write the report to a .json or .yaml file.',
        ),
        click.option(
            '--overwrite',
            is_flag=True,
            help='Replace an existing report file with different content.',
        ),
    ]
    for option in reversed(options):
        function = option(function)
    return function


def _run(
    ctx: click.Context,
    command: str,
    inputs: dict[str, Any],
    body: Callable[[], Outcome],
    *,
    tolerances: tuple[str, ...],
    verbose: bool,
    deterministic: bool,
    pretty: bool,
    output: Optional[Path],
    overwrite: bool,
    table: Optional[Callable[[RunReport], str]] = None,
) -> None:
    with stderr_logging(verbose):
        logger = structlog.get_logger(__name__)
        try:
            with tolerance_overrides(tolerances) as overrides:
                results, checks, summary = body()
        except ValueError as exc:
            click.echo(f'Error: {exc}', err=True)
            ctx.exit(EXIT_USAGE)
        if overrides:
            inputs = {**inputs, 'tolerances': overrides}
        report = build_report(
            command,
            inputs,
            results,
            checks,
            summary=summary,
            deterministic=deterministic,
        )
        entry_dict = report.model_dump(mode='json')
        click.echo(dump_report(entry_dict, 'json'), nl=False)
        if pretty:
            click.echo((table or checks_table)(report), err=True)
        if output is not None and not write_report(
            entry_dict, output, logger, overwrite=overwrite
        ):
            ctx.exit(EXIT_USAGE)
        if report.exit_status:
            logger.warning(
                'Checks failed',
                command=command,
                failed=[row.name for row in report.checks if not row.passed],
            )
        ctx.exit(report.exit_status)


def reporting(command: str, table: Optional[Callable[[RunReport], str]] = None):
    """
    Turns a function returning `(inputs, body)` into a command that runs
    `body` under the common options and emits its RunReport.
    """

    def decorator(function: Callable) -> Callable:
        @functools.wraps(function)
        @click.pass_context
        def wrapper(ctx: click.Context, **kwargs):
            shared = {
                name: kwargs.pop(name)
                for name in (
                    'tolerances',
                    'verbose',
                    'deterministic',
                    'pretty',
                    'output',
                    'overwrite',
                )
            }
            inputs, body = function(**kwargs)
            _run(ctx, command, inputs, body, table=table, **shared)

        return common_options(wrapper)

    return decorator


def _parallel_map(function: Callable, items: list) -> list:
    """Ordered map over `items`, independent of the number of workers."""
    workers = min(thread_count(), max(len(items), 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, items))


@click.group()
@click.version_option(package_name='polarize')
def cli():
    """The polarization product on complex normed spaces."""


@cli.command('product')
@click.option('--norm', required=True, help='Norm descriptor: JSON text or file.')
@click.option('--x', 'x_text', required=True, help='[[re, im], ...] or a file.')
@click.option('--y', 'y_text', required=True, help='[[re, im], ...] or a file.')
@reporting('product')
def product(norm: str, x_text: str, y_text: str):
    """<x|y>, both norms and the ratio |<x|y>| / (||x|| ||y||)."""

    def body() -> Outcome:
        descriptor = parse_descriptor(parse_json_argument(norm))
        x = CVector.model_validate(parse_json_argument(x_text))
        y = CVector.model_validate(parse_json_argument(y_text))
        value = polarization_product(descriptor, x, y)
        result = {**value.model_dump(mode='json'), 'csb_ratio': value.csb_ratio}
        check = Check.upper(
            'csb_ratio', value.csb_ratio, 1.0, general_configuration.csb_tol
        )
        return [result], [check], {}

    return {'norm': norm, 'x': x_text, 'y': y_text}, body


@cli.command('verify-csb')
@click.option('--norm', help='A norm on C^2: JSON text or file.')
@click.option('--family', type=click.Choice(FAMILY_NAMES), help='Random norms.')
@click.option('--trials', type=click.IntRange(min=1), default=100, show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@reporting('verify-csb')
def verify_csb(norm: Optional[str], family: Optional[str], trials: int, seed: int):
    """Runs the Cauchy-Schwarz proof chain on one or many norms on C^2."""
    if norm is None and family is None:
        raise click.UsageError('Pass --norm or --family.')

    def body() -> Outcome:
        if norm is not None:
            cases = [(None, parse_descriptor(parse_json_argument(norm)))]
        else:
            seeds = [derive_seed(seed, trial) for trial in range(trials)]
            cases = [(s, random_norm(family, 2, s)) for s in seeds]
        traces = _parallel_map(lambda case: verify_csb_proof(case[1]), cases)
        results = [
            {
                'seed': case_seed,
                'norm': dump_descriptor(descriptor),
                'trace': trace.model_dump(mode='json'),
            }
            for (case_seed, descriptor), trace in zip(cases, traces)
        ]
        checks = [check for trace in traces for check in trace.checks]
        passed = sum(trace.passed for trace in traces)
        summary = {'traces': len(traces), 'passed': passed}
        summary['failed'] = len(traces) - passed
        return results, checks, summary

    inputs = {'norm': norm} if norm is not None else {}
    if norm is None:
        inputs = {'family': family, 'trials': trials, 'seed': seed}
    return inputs, body


def _reproduction_table(report: RunReport) -> str:
    rows = report.results[0]['rows']
    frame = pd.DataFrame(
        [
            {
                'name': row['name'],
                'expected': complex(*row['expected']),
                'computed': complex(*row['computed']),
                'error': row['error'],
            }
            for row in rows
        ]
    )
    return frame.to_string(index=False)


@cli.command('reproduce-paper')
@reporting('reproduce-paper', table=_reproduction_table)
def reproduce_paper():
    """Recomputes the published values and compares them with closed forms."""

    def body() -> Outcome:
        report = reproduce()
        return (
            [report.model_dump(mode='json')],
            report.checks,
            {'modulus_gap': report.modulus_gap},
        )

    return {}, body


@cli.command('stress')
@click.option(
    '--family',
    type=click.Choice([*FAMILY_NAMES, 'all']),
    required=True,
    help='Norm family; "all" cycles through every family.',
)
@click.option('--dim', type=click.IntRange(min=1), default=2, show_default=True)
@click.option('--trials', type=click.IntRange(min=1), default=100, show_default=True)
@click.option('--restarts', type=click.IntRange(min=1), default=8, show_default=True)
@click.option('--iters', type=click.IntRange(min=1), default=200, show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@reporting('stress')
def stress(family: str, dim: int, trials: int, restarts: int, iters: int, seed: int):
    """Searches for pairs with |<x|y>| > ||x|| ||y|| on random norms."""
    families = list(FAMILIES) if family == 'all' else [NormFamily(family)]

    def body() -> Outcome:
        results, checks = [], []
        for trial in range(trials):
            trial_seed = derive_seed(seed, trial)
            norm = random_norm(families[trial % len(families)], dim, trial_seed)
            search = max_abs_product(
                norm, restarts, iters, trial_seed, dim=norm.dim or dim
            )
            results.append(search.model_dump(mode='json'))
            checks.append(
                Check.upper(
                    'csb_ratio',
                    search.best_value,
                    1.0,
                    general_configuration.csb_tol,
                )
            )
        summary = {'max_ratio': max(check.lhs for check in checks)}
        return results, checks, summary

    inputs = {
        'family': family,
        'dim': dim,
        'trials': trials,
        'restarts': restarts,
        'iters': iters,
        'seed': seed,
    }
    return inputs, body


@cli.command('explore-conjecture')
@click.option(
    '--family',
    'families',
    type=click.Choice(FAMILY_NAMES),
    multiple=True,
    help='Restrict to these families; all families by default.',
)
@click.option('--dim', type=click.IntRange(min=1), default=2, show_default=True)
@click.option('--trials', type=click.IntRange(min=1), default=100, show_default=True)
@click.option('--restarts', type=click.IntRange(min=1), default=8, show_default=True)
@click.option('--iters', type=click.IntRange(min=1), default=200, show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@reporting('explore-conjecture')
def explore(
    families: tuple[str, ...],
    dim: int,
    trials: int,
    restarts: int,
    iters: int,
    seed: int,
):
    """
    Compares phase homogeneity of the product with the parallelogram law.
    Flags are reported, they never fail the run.
    """

    def body() -> Outcome:
        report = explore_conjecture(
            list(families), trials, seed, dim=dim, restarts=restarts, iters=iters
        )
        summary = {'entries': len(report.entries), 'flags': len(report.flags)}
        return [report.model_dump(mode='json')], [], summary

    inputs = {
        'families': list(families) or FAMILY_NAMES,
        'dim': dim,
        'trials': trials,
        'restarts': restarts,
        'iters': iters,
        'seed': seed,
    }
    return inputs, body

