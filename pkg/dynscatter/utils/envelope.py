"""Result envelope for every CLI command.

Every command, successful or not, prints exactly one JSON document:

    {
        "success": bool,
        "data": {...},
        "error": null or {"message": ..., "code": ...},
        "meta": {"run_id": "...", "command": "scatter"}
    }
"""

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from dynscatter.errors import ScatteringError


@dataclass
class ResultMeta:
    """Metadata attached to every envelope."""
    run_id: str
    command: str


@dataclass
class ResultEnvelope:
    """
    Attributes:
        success (bool): Whether the command completed
        data (Dict): Command payload (empty {} on error)
        error (Optional[Dict]): Error message and code on failure
        meta (ResultMeta): Run tracking metadata
    """

    success: bool
    data: Dict[str, Any]
    error: Optional[Dict[str, Any]]
    meta: ResultMeta

    def to_dict(self) -> Dict[str, Any]:
        return {
            "success": self.success,
            "data": self.data if self.success else {},
            "error": self.error if not self.success else None,
            "meta": {
                "run_id": self.meta.run_id,
                "command": self.meta.command,
            },
        }

    def to_json(self, **kwargs) -> str:
        """Serialize with numpy scalars and complex numbers made JSON-safe."""
        kwargs.setdefault("default", _json_default)
        return json.dumps(_finite(self.to_dict()), **kwargs)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag, "abs": abs(value)}
    return str(value)


def _finite(value: Any) -> Any:
    """Replace NaN and infinities by None so the output stays strict JSON."""
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return None
    return value


def create_success_envelope(data: Dict[str, Any], run_id: str, command: str) -> ResultEnvelope:
    return ResultEnvelope(success=True, data=data, error=None, meta=ResultMeta(run_id, command))


def create_error_envelope(
    error_message: str,
    error_code: str,
    run_id: str,
    command: str,
    details: Optional[Dict[str, Any]] = None,
) -> ResultEnvelope:
    error_dict: Dict[str, Any] = {"message": error_message, "code": error_code}
    if details:
        error_dict["details"] = details
    return ResultEnvelope(success=False, data={}, error=error_dict, meta=ResultMeta(run_id, command))


# ---------------------------------------------------------------------------
# Exception -> (message, code)
# ---------------------------------------------------------------------------
_ERROR_TYPE_MAP: dict[str, tuple[str, str]] = {
    "JSONDecodeError": ("Potential specification is not valid JSON", "VALIDATION_ERROR"),
    "YAMLError": ("Potential specification is not valid YAML", "VALIDATION_ERROR"),
    "FileNotFoundError": ("Input file not found", "IO_ERROR"),
    "PermissionError": ("Input or output file is not accessible", "IO_ERROR"),
    "IsADirectoryError": ("Expected a file, got a directory", "IO_ERROR"),
}


def describe_error(error: Exception) -> Tuple[str, str]:
    """Map an exception to a user-facing ``(message, code)`` pair.

    Solver errors carry their own code and a message safe to print. Anything
    unrecognised becomes a generic internal error; the traceback goes to the log.
    """
    if isinstance(error, ScatteringError):
        return str(error), error.code

    if isinstance(error, ValidationError):
        first = error.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ())) or "input"
        return f"Invalid specification at '{where}': {first.get('msg')}", "VALIDATION_ERROR"

    for cls in type(error).__mro__:
        if cls.__name__ in _ERROR_TYPE_MAP:
            return _ERROR_TYPE_MAP[cls.__name__]

    if isinstance(error, (ValueError, KeyError)):
        return str(error), "VALIDATION_ERROR"

    return ("Internal solver error", "INTERNAL_ERROR")
