"""Validated input models: potential specifications, design requests, run configuration."""

from .design_spec import DesignGoal, DesignSpec
from .potential_spec import PotentialSpec, parse_potential_spec
from .run_config import RunConfig

__all__ = ['DesignGoal', 'DesignSpec', 'PotentialSpec', 'RunConfig', 'parse_potential_spec']
