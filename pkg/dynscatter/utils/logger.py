"""Structured solver logger.

Every solve that passes through an instrumented entry point is logged with:
  - route
  - k
  - status (ok or the error code)
  - accepted steps
  - duration_ms

Solver state (trajectories, amplitudes) is never logged here; callers that
need it log it themselves at DEBUG.
"""

import logging
import time
from functools import wraps

logger = logging.getLogger("dynscatter.solver")

# ---------------------------------------------------------------------------
# Structured formatter
# ---------------------------------------------------------------------------

class SolverFormatter(logging.Formatter):
    """Key=value formatter for solve records."""

    def format(self, record: logging.LogRecord) -> str:
        solve = getattr(record, "solve", None)
        if solve:
            parts = " | ".join(f"{k}={v}" for k, v in solve.items())
            record.msg = f"[SOLVE] {parts}"
            record.args = ()
        return super().format(record)


def _setup_solver_logger() -> logging.Logger:
    """Configure the ``dynscatter.solver`` logger with the structured formatter.

    Called once at module load; subsequent calls are idempotent.
    """
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(
            SolverFormatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        )
        logger.addHandler(handler)
        logger.setLevel(logging.WARNING)
        logger.propagate = False
    return logger


_setup_solver_logger()


def set_solver_level(level: int) -> None:
    """Apply the configured level to the solver logger (the CLI calls this)."""
    logger.setLevel(level)


# ---------------------------------------------------------------------------
# Core logging function
# ---------------------------------------------------------------------------

def log_solve(
    route: str,
    k: float,
    status: str,
    *,
    steps: int | None = None,
    duration_ms: float | None = None,
) -> None:
    """Emit a structured record for a completed (or failed) solve.

    Args:
        route: Solver route name (evolution, jost, s-form, riccati).
        k: Wavenumber of the solve.
        status: ``"ok"`` or the error code of the raised exception.
        steps: Accepted integrator steps, when known.
        duration_ms: Optional elapsed time in milliseconds.
    """
    solve_data = {
        "route": route,
        "k": f"{k:.12g}",
        "status": status,
    }
    if steps is not None:
        solve_data["steps"] = steps
    if duration_ms is not None:
        solve_data["duration_ms"] = round(duration_ms, 2)

    level = logging.INFO if status == "ok" else logging.WARNING
    logger.log(level, "", extra={"solve": solve_data})


# ---------------------------------------------------------------------------
# Decorator: automatic per-solve logging
# ---------------------------------------------------------------------------

def timed_solve(route: str):
    """Decorator that logs every call of a solver entry point.

    The wrapped function must take ``(potential, k, ...)`` and return an
    object exposing ``accepted_steps`` (or nothing). Exceptions are logged
    with their ``code`` and re-raised unchanged.
    """
    def decorator(f):
        @wraps(f)
        def decorated_function(potential, k, *args, **kwargs):
            start = time.perf_counter()
            try:
                result = f(potential, k, *args, **kwargs)
            except Exception as exc:
                elapsed = (time.perf_counter() - start) * 1000
                log_solve(route, k, getattr(exc, "code", type(exc).__name__),
                          duration_ms=elapsed)
                raise

            elapsed = (time.perf_counter() - start) * 1000
            log_solve(
                route,
                k,
                "ok",
                steps=getattr(result, "accepted_steps", None),
                duration_ms=elapsed,
            )
            return result

        return decorated_function

    return decorator
