import logging
import sys
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Optional

import pandas as pd
import structlog
from pydantic import BaseModel, Field

from polarize.csb import configuration as csb_configuration
from polarize.errors import ContractViolationError
from polarize.explorer import configuration as explorer_configuration
from polarize.general import configuration as general_configuration
from polarize.general.schema import Check
from polarize.norms import configuration as norms_configuration
from polarize.product import configuration as product_configuration

SECTIONS: dict[str, BaseModel] = {
    'general': general_configuration,
    'norms': norms_configuration,
    'product': product_configuration,
    'csb': csb_configuration,
    'explorer': explorer_configuration,
}

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class CheckSummary(BaseModel):
    name: str
    count: int
    failed: int
    passed: bool
    worst_margin: float = Field(
        description='Smallest `rhs - lhs` over all checks of this name.'
    )


class RunReport(BaseModel):
    version: str
    command: str
    inputs: dict[str, Any] = Field(default_factory=dict)
    results: list[Any] = Field(default_factory=list)
    summary: dict[str, Any] = Field(default_factory=dict)
    checks: list[CheckSummary] = Field(default_factory=list)
    exit_status: int
    timestamp: Optional[str] = None


def tool_version() -> str:
    try:
        return version('polarize')
    except PackageNotFoundError:
        return '0.0.0'


def summarize_checks(checks: Iterable[Check]) -> list[CheckSummary]:
    """
    One row per check name, in order of first appearance.
    """
    frame = pd.DataFrame([check.model_dump() for check in checks])
    if frame.empty:
        return []
    frame['failed'] = ~frame['passed']
    grouped = frame.groupby('name', sort=False).agg(
        count=('passed', 'size'),
        failed=('failed', 'sum'),
        worst_margin=('margin', 'min'),
    )
    return [
        CheckSummary(
            name=str(name),
            count=int(row['count']),
            failed=int(row['failed']),
            passed=int(row['failed']) == 0,
            worst_margin=float(row['worst_margin']),
        )
        for name, row in grouped.iterrows()
    ]


def build_report(
    command: str,
    inputs: dict[str, Any],
    results: list[Any],
    checks: list[Check],
    *,
    summary: Optional[dict[str, Any]] = None,
    deterministic: bool = False,
) -> RunReport:
    summaries = summarize_checks(checks)
    passed = all(row.passed for row in summaries)
    return RunReport(
        version=tool_version(),
        command=command,
        inputs=inputs,
        results=results,
        summary=summary or {},
        checks=summaries,
        exit_status=EXIT_PASSED if passed else EXIT_FAILED,
        timestamp=None
        if deterministic
        else datetime.now(timezone.utc).isoformat(timespec='seconds'),
    )


def checks_table(report: RunReport) -> str:
    frame = pd.DataFrame([row.model_dump() for row in report.checks])
    if frame.empty:
        return 'no checks'
    return frame.to_string(index=False)


def parse_override(text: str) -> tuple[str, str, float]:
    """Splits `SECTION.FIELD=VALUE`."""
    try:
        key, value = text.split('=', 1)
        section, field = key.strip().split('.', 1)
        number = float(value)
    except ValueError as exc:
        raise ContractViolationError(
            f'Expected SECTION.FIELD=VALUE, got "{text}".'
        ) from exc
    if section not in SECTIONS:
        raise ContractViolationError(
            f'Unknown section "{section}", expected one of {sorted(SECTIONS)}.'
        )
    if field not in type(SECTIONS[section]).model_fields:
        raise ContractViolationError(f'"{section}" has no setting "{field}".')
    return section, field, number


@contextmanager
def tolerance_overrides(overrides: Iterable[str]) -> Iterator[dict[str, float]]:
    """
    Applies `--tol` overrides to the package configurations and restores the
    previous values afterwards.
    """
    parsed = [parse_override(text) for text in overrides]
    previous = []
    try:
        for section, field, number in parsed:
            config = SECTIONS[section]
            previous.append((config, field, getattr(config, field)))
            setattr(config, field, number)
        yield {f'{section}.{field}': number for section, field, number in parsed}
    finally:
        for config, field, value in reversed(previous):
            setattr(config, field, value)


@contextmanager
def stderr_logging(verbose: bool) -> Iterator[None]:
    """
    Routes structlog output to stderr so that stdout carries only the report.
    """
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.DEBUG if verbose else logging.INFO
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
    try:
        yield
    finally:
        structlog.reset_defaults()
