"""Configuration settings for dynscatter.

Acts as the single source of numerical defaults and runtime switches. Values are
read from the environment (optionally seeded by a ``.env`` file next to this
package) and switch between interactive local runs and quiet batch sweeps based
on the SCATTER1D_ENV environment variable.
"""

import os
import logging
from pathlib import Path
from dotenv import load_dotenv

# Load .env from the package directory
_pkg_dir = Path(__file__).resolve().parent
load_dotenv(_pkg_dir / ".env")


# Read environment variable (default to 'local')
ENV = os.getenv('SCATTER1D_ENV', 'local').lower()

# Validate ENV value
if ENV not in ['local', 'batch']:
    raise ValueError(f"Invalid SCATTER1D_ENV value: {ENV}. Expected 'local' or 'batch'.")


# ============================================================================
# Environment-based Configuration
# ============================================================================

if ENV == 'local':
    """Interactive runs: progress and per-solve records are useful."""
    LOG_LEVEL = logging.INFO

elif ENV == 'batch':
    """Long sweeps on shared hosts: warnings and failures only."""
    LOG_LEVEL = logging.WARNING

_level_override = os.getenv('SCATTER1D_LOG_LEVEL')
if _level_override:
    LOG_LEVEL = logging.getLevelName(_level_override.upper())
    if not isinstance(LOG_LEVEL, int):
        raise ValueError(f"Invalid SCATTER1D_LOG_LEVEL value: {_level_override}")


# ============================================================================
# Common Configuration (applies to both environments)
# ============================================================================

APP_NAME = "dynscatter"
VERSION = "1.0.0"

# Integrator defaults (cross-route agreement is checked at 1e-8)
def _env_number(name, default, cast):
    raw = os.getenv(name, default)
    try:
        return cast(raw)
    except ValueError:
        raise ValueError(f"Invalid numerical settings: {name}={raw!r} is not a number") from None


DEFAULT_REL_TOL = _env_number('SCATTER1D_REL_TOL', '1e-10', float)
DEFAULT_ABS_TOL = _env_number('SCATTER1D_ABS_TOL', '1e-12', float)
DEFAULT_MAX_STEPS = _env_number('SCATTER1D_MAX_STEPS', '200000', int)
DEFAULT_QUAD_LIMIT = _env_number('SCATTER1D_QUAD_LIMIT', '500', int)

# Sweep parallelism
THREADS = _env_number('SCATTER1D_THREADS', str(os.cpu_count() or 1), int)

# Solver guards
DETERMINANT_DRIFT_LIMIT = 1e-6
RICCATI_BLOWUP = 1e8
SINGULARITY_FLOOR = 1e-10
TRANSFER_FLOOR = 1e-12
PROFILE_CHECK_POINTS = 10_000
PROFILE_SAMPLES = 1001

# Classification threshold used by the CLI and the design checks
CLASSIFY_EPS = 1e-6

# Logging configuration
LOGGING_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)
logger.debug(f"dynscatter configuration loaded for environment: {ENV}")
logger.debug(f"Tolerances: rel={DEFAULT_REL_TOL} abs={DEFAULT_ABS_TOL} threads={THREADS}")

# ============================================================================
# Numerical Settings Validation
# ============================================================================

_invalid = {
    'SCATTER1D_REL_TOL': DEFAULT_REL_TOL <= 0,
    'SCATTER1D_ABS_TOL': DEFAULT_ABS_TOL <= 0,
    'SCATTER1D_MAX_STEPS': DEFAULT_MAX_STEPS < 1,
    'SCATTER1D_QUAD_LIMIT': DEFAULT_QUAD_LIMIT < 1,
    'SCATTER1D_THREADS': THREADS < 1,
}
_failed = [name for name, bad in _invalid.items() if bad]
if _failed:
    for name in _failed:
        logger.error(f"CRITICAL: {name} must be strictly positive")
    raise ValueError(f"Invalid numerical settings: {', '.join(_failed)}")

if DEFAULT_REL_TOL > 1e-8:
    logger.warning(
        f"SCATTER1D_REL_TOL={DEFAULT_REL_TOL} is looser than the 1e-8 cross-route agreement target"
    )
