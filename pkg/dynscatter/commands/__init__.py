from dynscatter.commands.design import cmd_design
from dynscatter.commands.scatter import cmd_scatter
from dynscatter.commands.sweep import cmd_sweep
from dynscatter.commands.trajectory import cmd_trajectory
from dynscatter.commands.verify import cmd_verify

COMMANDS = {
    "scatter": cmd_scatter,
    "sweep": cmd_sweep,
    "design": cmd_design,
    "verify": cmd_verify,
    "trajectory": cmd_trajectory,
}

__all__ = ["COMMANDS", "cmd_design", "cmd_scatter", "cmd_sweep", "cmd_trajectory", "cmd_verify"]
