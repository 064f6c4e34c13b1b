"""Argument gatekeeping that runs **before** any solver is invoked.

Rejects:
  1. Potential specifications larger than 1 MB (inline or file).
  2. Specifications that are not a JSON/YAML object.
  3. Wavenumbers and ranges that are not strictly positive and nonempty.

Accepted arguments are turned into a validated ``RunConfig``.
"""

import json
import logging
from argparse import Namespace
from functools import wraps
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from dynscatter.errors import InvalidConfig
from dynscatter.models.run_config import RunConfig

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------
MAX_SPEC_BYTES = 1 * 1024 * 1024   # 1 MB

_RUN_FIELDS = tuple(RunConfig.model_fields)


# ---------------------------------------------------------------------------
# Internal helpers
# ---------------------------------------------------------------------------

def _validate_spec_size(size: int) -> str | None:
    """Return an error message if a specification exceeds the size limit."""
    if size > MAX_SPEC_BYTES:
        return (
            f"Potential specification too large ({size} bytes). "
            f"Maximum allowed is {MAX_SPEC_BYTES} bytes (1 MB)."
        )
    return None


def _validate_k_range(lo: float, hi: float, n: int) -> str | None:
    if not lo > 0:
        return "Range start must be strictly positive"
    if n < 1:
        return "Range needs at least one point"
    if hi < lo or (hi == lo and n > 1):
        return f"Range {lo}:{hi}:{n} is empty"
    return None


def _validate_spec_object(spec: Any) -> str | None:
    if not isinstance(spec, dict):
        return "Potential specification must be a JSON object"
    if "kind" not in spec:
        return "Missing required field: kind"
    return None


def _is_file(path: Path) -> bool:
    try:
        return path.is_file()
    except OSError:
        return False


def load_potential_source(source: str) -> Dict[str, Any]:
    """Decode a potential specification given inline or as a .json/.yaml path.

    Raises:
        InvalidConfig: Size limit exceeded or the decoded value is not an object.
    """
    path = Path(source)
    looks_inline = source.lstrip().startswith(("{", "["))
    if not looks_inline and _is_file(path):
        size_error = _validate_spec_size(path.stat().st_size)
        if size_error:
            raise InvalidConfig(size_error)
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() in (".yaml", ".yml"):
            spec = yaml.safe_load(text)
        else:
            spec = json.loads(text)
    else:
        size_error = _validate_spec_size(len(source.encode("utf-8")))
        if size_error:
            raise InvalidConfig(size_error)
        spec = json.loads(source)

    schema_error = _validate_spec_object(spec)
    if schema_error:
        raise InvalidConfig(schema_error)
    return spec


def run_config_from_args(args: Namespace) -> RunConfig:
    values: Dict[str, Any] = {
        name: getattr(args, name) for name in _RUN_FIELDS
        if getattr(args, name, None) is not None
    }
    for name in ("k_range", "k0L_range"):
        if name in values:
            range_error = _validate_k_range(*values[name])
            if range_error:
                raise InvalidConfig(range_error)
    source: Optional[str] = values.pop("potential", None)
    if source is not None:
        values["potential"] = load_potential_source(source)
    return RunConfig(**values)


# ---------------------------------------------------------------------------
# Decorator
# ---------------------------------------------------------------------------

def with_run_config(f):
    """Decorator that hands the command a validated ``RunConfig``.

    Must be applied **under** ``@governed_command`` so rejected arguments are
    reported through the envelope with exit status 2.
    """
    @wraps(f)
    def decorated_function(args, *rest, **kwargs):
        if isinstance(args, RunConfig):
            return f(args, *rest, **kwargs)
        run = run_config_from_args(args)
        logger.debug("run config: %s", run.model_dump(exclude={"potential"}))
        return f(run, *rest, **kwargs)

    return decorated_function
