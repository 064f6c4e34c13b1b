import logging
import math

import numpy as np

from dynscatter.amplitudes import Route, SWEEP_COLUMNS, sweep
from dynscatter.commands.shared import classify_eps, load_potential, potential_summary
from dynscatter.design import DESIGN_SWEEP_COLUMNS, design_sweep
from dynscatter.middleware.error_handler import CommandOutput, governed_command
from dynscatter.middleware.validation import with_run_config
from dynscatter.models.run_config import RunConfig
from dynscatter.utils.tabular import Table

logger = logging.getLogger(__name__)


def _local_maxima(x: np.ndarray, y: np.ndarray) -> list:
    return [float(x[i]) for i in range(1, len(y) - 1) if y[i] > y[i - 1] and y[i] >= y[i + 1]]


def _k_sweep(run: RunConfig) -> CommandOutput:
    p = load_potential(run)
    lo, hi, n = run.k_range
    rows = sweep(p, np.linspace(lo, hi, n), Route(run.route), run.integrator_config(),
                 threads=run.threads, eps=classify_eps(run))
    good = [r for r in rows if r.amplitudes is not None]
    deviations = [r.amplitudes.deviation for r in good if r.amplitudes.deviation is not None]
    data = {
        "mode": "wavenumber",
        "potential": potential_summary(p),
        "route": run.route,
        "points": len(rows),
        "flagged": [{"k": r.k, "status": r.status} for r in rows if not r.ok],
        "max_deviation": max(deviations) if deviations else None,
        "max_unitarity_residual": max((r.amplitudes.unitarity_residual() for r in good), default=None),
    }
    table = Table(list(SWEEP_COLUMNS), [r.to_row() for r in rows])
    if run.format == "json":
        data["rows"] = table.records()
    return CommandOutput(data=data, table=table)


def _design_sweep(run: RunConfig) -> CommandOutput:
    lo, hi, n = run.k0L_range
    grid = np.linspace(lo, hi, n)
    rows = design_sweep(grid, run.gamma, run.k0, run.integrator_config(), threads=run.threads)
    mags = np.array([abs(r.prediction.left_reflection) if r.prediction else np.nan for r in rows])
    data = {
        "mode": "design",
        "goal": run.goal.value,
        "gamma": run.gamma,
        "k0": run.k0,
        "points": len(rows),
        "flagged": [{"k0L": r.k0L, "status": r.status} for r in rows if r.status != "ok"],
        "left_reflection_maxima_over_pi": [x / math.pi for x in _local_maxima(grid, mags)],
    }
    table = Table(list(DESIGN_SWEEP_COLUMNS), [r.to_row() for r in rows])
    if run.format == "json":
        data["rows"] = table.records()
    return CommandOutput(data=data, table=table)


@governed_command("sweep")
@with_run_config
def cmd_sweep(run: RunConfig) -> CommandOutput:
    """Amplitude spectra over k, or design-time T and R^l over k0 L (``--goal uinv``)."""
    if run.k0L_range is not None:
        return _design_sweep(run)
    return _k_sweep(run)
