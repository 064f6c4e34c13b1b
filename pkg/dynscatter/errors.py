"""Controlled error types raised by the solvers and the design constructors.

Every error carries a stable ``code`` so the CLI can map it to an exit status
and an envelope without inspecting messages.
"""

from typing import Any, Dict, Optional


class ScatteringError(Exception):
    """Base class for every error raised inside dynscatter."""

    code = "SCATTERING_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class InvalidConfig(ScatteringError, ValueError):
    code = "VALIDATION_ERROR"


class StepLimitExceeded(ScatteringError):
    """The adaptive integrator could not finish the span."""

    code = "STEP_LIMIT"


class NonFiniteState(ScatteringError):
    code = "NON_FINITE_STATE"


class NonFiniteIntegrand(ScatteringError):
    code = "NON_FINITE_INTEGRAND"


class DeterminantDrift(ScatteringError):
    """det M drifted away from 1 along an evolution trajectory."""

    code = "DETERMINANT_DRIFT"


class BlowUp(ScatteringError):
    """The Riccati solution escaped; S' is close to zero on the arc."""

    code = "RICCATI_BLOWUP"


class SpectralSingularityEncountered(ScatteringError):
    """T has a pole at the requested real wavenumber."""

    code = "SPECTRAL_SINGULARITY"


class ZeroTransmission(ScatteringError):
    code = "ZERO_TRANSMISSION"


class PoleEncountered(ScatteringError):
    code = "POLE"


class SingularProfile(ScatteringError):
    """A designed index profile has a vanishing denominator on [0, L]."""

    code = "SINGULAR_PROFILE"


class InvalidTransferMatrix(ScatteringError, ValueError):
    code = "INVALID_TRANSFER_MATRIX"
