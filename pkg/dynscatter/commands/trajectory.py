import numpy as np

from dynscatter.evolution import TRAJECTORY_COLUMNS, evolve_transfer
from dynscatter.commands.shared import load_potential, potential_summary
from dynscatter.middleware.error_handler import CommandOutput, governed_command
from dynscatter.middleware.validation import with_run_config
from dynscatter.models.run_config import RunConfig
from dynscatter.utils.tabular import Table


@governed_command("trajectory")
@with_run_config
def cmd_trajectory(run: RunConfig) -> CommandOutput:
    """M(alpha) across the support, sampled on ``--points`` values of alpha plus the integrator steps."""
    p = load_potential(run)
    grid = np.linspace(run.k * p.lower, run.k * p.upper, run.points)
    traj = evolve_transfer(p, run.k, run.integrator_config(), alpha_grid=grid)
    m = traj.final
    data = {
        "potential": potential_summary(p),
        "k": run.k,
        "samples": int(traj.alpha.size),
        "accepted_steps": traj.accepted_steps,
        "max_det_residual": float(np.max(traj.det_residuals())),
        "final": {name: getattr(m, name) for name in ("m11", "m12", "m21", "m22")},
    }
    table = Table(list(TRAJECTORY_COLUMNS), traj.to_rows())
    if run.format == "json":
        data["rows"] = table.records()
    return CommandOutput(data=data, table=table)
