from dynscatter.middleware.error_handler import EXIT_CHECK_FAILED, EXIT_OK, CommandOutput, governed_command
from dynscatter.middleware.validation import with_run_config
from dynscatter.models.run_config import RunConfig
from dynscatter.utils.tabular import Table
from dynscatter.verification import run_suite

CHECK_COLUMNS = ["name", "residual", "tolerance", "passed", "detail"]


@governed_command("verify")
@with_run_config
def cmd_verify(run: RunConfig) -> CommandOutput:
    """Run the cross-check suite; exit 1 if any check fails."""
    results = run_suite(tolerance=run.check_tol, cfg=run.integrator_config())
    failed = [r.name for r in results if not r.passed]
    data = {
        "passed": not failed,
        "total": len(results),
        "failed": failed,
        "checks": [r.to_dict() for r in results],
    }
    table = Table(CHECK_COLUMNS, [[r.name, r.residual, r.tolerance, r.passed, r.detail] for r in results])
    return CommandOutput(data=data, table=table, exit_code=EXIT_CHECK_FAILED if failed else EXIT_OK)
