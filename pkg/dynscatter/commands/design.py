import logging

from dynscatter.amplitudes import Route
from dynscatter.commands.shared import classify_eps
from dynscatter.design import design, sample_index_profile, verify_design
from dynscatter.middleware.error_handler import CommandOutput, governed_command
from dynscatter.middleware.validation import with_run_config
from dynscatter.models.design_spec import DesignSpec
from dynscatter.models.run_config import RunConfig
from dynscatter.potential import PROFILE_COLUMNS
from dynscatter.utils.tabular import Table, write_csv_file

logger = logging.getLogger(__name__)


@governed_command("design")
@with_run_config
def cmd_design(run: RunConfig) -> CommandOutput:
    """Build a profile for the requested goal at k0 and forward-check it.

    The sampled n^2 profile is the command's table; ``--profile-out`` writes it
    as CSV alongside the JSON result.
    """
    spec = DesignSpec(k0=run.k0, length=run.k0L / run.k0, goal=run.goal, gamma=run.gamma)
    cfg = run.integrator_config()
    result = design(spec, dispersive=run.dispersive, cfg=cfg)
    check = verify_design(result, Route(run.route), cfg, classify_eps(run))
    if not check.passed:
        logger.warning("design check for %s did not meet tolerance: %s", spec.goal.value, check.residuals)

    profile = sample_index_profile(result, run.points)
    table = Table(list(PROFILE_COLUMNS), profile.to_rows())
    data = {"design": result.to_dict(), "verification": check.to_dict()}
    if run.profile_out is not None:
        data["profile_out"] = str(write_csv_file(table, run.profile_out))
    return CommandOutput(data=data, table=table)
