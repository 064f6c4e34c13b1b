"""Utilities: result envelopes, CSV tables, scalar parsing and solver logging."""

from .envelope import (
    ResultEnvelope,
    ResultMeta,
    create_error_envelope,
    create_success_envelope,
    describe_error,
)
from .logger import (
    SolverFormatter,
    log_solve,
    timed_solve,
)
from .scalars import parse_range, parse_scalar
from .tabular import Table, table_to_csv, write_csv_file

__all__ = [
    'ResultEnvelope',
    'ResultMeta',
    'create_error_envelope',
    'create_success_envelope',
    'describe_error',
    'SolverFormatter',
    'log_solve',
    'timed_solve',
    'parse_range',
    'parse_scalar',
    'Table',
    'table_to_csv',
    'write_csv_file',
]
