"""Command middleware: argument validation and error governance."""

from .error_handler import (
    CommandOutput,
    CommandResult,
    exit_code_for,
    generate_run_id,
    governed_command,
)
from .validation import (
    load_potential_source,
    run_config_from_args,
    with_run_config,
)

__all__ = [
    'CommandOutput',
    'CommandResult',
    'exit_code_for',
    'generate_run_id',
    'governed_command',
    'load_potential_source',
    'run_config_from_args',
    'with_run_config',
]
