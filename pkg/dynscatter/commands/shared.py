"""Helpers shared by the command handlers."""

from dynscatter import config
from dynscatter.models.potential_spec import parse_potential_spec
from dynscatter.models.run_config import RunConfig
from dynscatter.potential import Potential, potential_from_spec


def load_potential(run: RunConfig) -> Potential:
    spec = parse_potential_spec(run.potential)
    return potential_from_spec(spec)


def classify_eps(run: RunConfig) -> float:
    return run.check_tol if run.check_tol is not None else config.CLASSIFY_EPS


def potential_summary(p: Potential) -> dict:
    return {
        "kind": p.kind.value,
        "support": [p.lower, p.upper],
        "breakpoints": list(p.breakpoints),
    }
