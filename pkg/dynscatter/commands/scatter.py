import logging

from dynscatter.amplitudes import Route, SWEEP_COLUMNS, SweepRow, classify, scatter
from dynscatter.commands.shared import classify_eps, load_potential, potential_summary
from dynscatter.errors import SpectralSingularityEncountered
from dynscatter.middleware.error_handler import CommandOutput, governed_command
from dynscatter.middleware.validation import with_run_config
from dynscatter.models.run_config import RunConfig
from dynscatter.utils.tabular import Table

logger = logging.getLogger(__name__)


@governed_command("scatter")
@with_run_config
def cmd_scatter(run: RunConfig) -> CommandOutput:
    """Amplitudes, flags and route deviation of one potential at one k.

    A spectral singularity at the requested k is reported as an error (exit 4)
    carrying the amplitudes and flags as details.
    """
    p = load_potential(run)
    amps = scatter(p, run.k, Route(run.route), run.integrator_config())
    flags = classify(amps, classify_eps(run))
    logger.info("scatter k=%.12g route=%s flags=%s", run.k, run.route, flags.active())

    if flags.is_spectral_singularity:
        raise SpectralSingularityEncountered(
            f"spectral singularity at k={run.k:.12g} (|1/T|={flags.residuals['inverse_transmission']:.3e})",
            details={"amplitudes": amps.to_dict(), "flags": flags.to_dict()},
        )

    data = {
        "potential": potential_summary(p),
        "amplitudes": amps.to_dict(),
        "flags": flags.to_dict(),
        "deviation": amps.deviation,
    }
    table = Table(list(SWEEP_COLUMNS), [SweepRow(run.k, amps, flags).to_row()])
    return CommandOutput(data=data, table=table)
