"""Command governance: every CLI command runs through ``governed_command``.

Rules enforced:
- A command always produces exactly one ResultEnvelope.
- Exceptions never escape to the user; they are logged with a traceback and
  reported as (message, code).
- Every error code maps to one documented exit status.
"""

import logging
import traceback
import uuid
from dataclasses import dataclass
from functools import wraps
from typing import Any, Dict, Optional

from dynscatter.errors import ScatteringError
from dynscatter.utils.envelope import (
    ResultEnvelope,
    create_error_envelope,
    create_success_envelope,
    describe_error,
)
from dynscatter.utils.tabular import Table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_CONFIG = 2
EXIT_SOLVER_FAILURE = 3
EXIT_SPECTRAL_SINGULARITY = 4

_EXIT_CODES: Dict[str, int] = {
    "VALIDATION_ERROR": EXIT_INVALID_CONFIG,
    "IO_ERROR": EXIT_INVALID_CONFIG,
    "SINGULAR_PROFILE": EXIT_INVALID_CONFIG,
    "SPECTRAL_SINGULARITY": EXIT_SPECTRAL_SINGULARITY,
}


def exit_code_for(error_code: str) -> int:
    """Exit status for an error code; solver failures are the default."""
    return _EXIT_CODES.get(error_code, EXIT_SOLVER_FAILURE)


def generate_run_id() -> str:
    return str(uuid.uuid4())


@dataclass
class CommandOutput:
    """What a command returns: JSON payload, optional table, exit status."""
    data: Dict[str, Any]
    table: Optional[Table] = None
    exit_code: int = EXIT_OK


@dataclass
class CommandResult:
    envelope: ResultEnvelope
    table: Optional[Table] = None
    exit_code: int = EXIT_OK


def governed_command(command: str):
    """
    Decorator that wraps a command with error governance.

    Usage:
        @governed_command("scatter")
        def cmd_scatter(run):
            return CommandOutput(data={...})
    """
    def decorator(f):
        @wraps(f)
        def decorated_function(*args, **kwargs) -> CommandResult:
            run_id = generate_run_id()

            try:
                result = f(*args, **kwargs)
            except Exception as e:
                if isinstance(e, ScatteringError):
                    logger.warning(f"Command {command} failed (run_id: {run_id}): {e.code}: {e}")
                else:
                    logger.error(
                        f"Error in command {command} (run_id: {run_id})\n"
                        f"Error: {type(e).__name__}: {str(e)}\n"
                        f"Traceback:\n{traceback.format_exc()}"
                    )
                message, code = describe_error(e)
                envelope = create_error_envelope(
                    error_message=message,
                    error_code=code,
                    run_id=run_id,
                    command=command,
                    details=getattr(e, "details", None) or None,
                )
                return CommandResult(envelope, None, exit_code_for(code))

            if not isinstance(result, CommandOutput):
                logger.warning(
                    f"Command {command} returned {type(result).__name__}; wrapping (run_id: {run_id})"
                )
                result = CommandOutput(data=result if isinstance(result, dict) else {"result": str(result)})

            envelope = create_success_envelope(result.data, run_id, command)
            return CommandResult(envelope, result.table, result.exit_code)

        return decorated_function

    return decorator
