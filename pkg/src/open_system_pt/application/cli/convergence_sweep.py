"""
CLI for convergence sweeps: runs every (dt, epsilon, n_modes) point of the [sweep] table
in parallel and writes the threshold-error and Trotter-error tables.
"""

import argparse
import asyncio
import sys
from collections.abc import Sequence

from open_system_pt.application.cli.run_simulation import add_override_flags, overrides_from_args
from open_system_pt.application.services.convergence_service import ConvergenceService
from open_system_pt.exceptions import SimulationError
from open_system_pt.infrastructure.config_loader import load_config
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()


async def run_sweep(config_path: str, overrides: dict) -> int:
    """Load, sweep and report.
    Returns:
        int: Exit code.
    """
    config = load_config(config_path, overrides)
    report = await ConvergenceService(config).run()
    for row in report.threshold_rows:
        logger.info(
            f"dt={row.dt:g} eps={row.epsilon:g} n={row.n_modes}: "
            f"error={row.error:.3e}, d_max={row.d_max}, {row.wall_time:.2f}s"
        )
    if report.trotter_slope is not None:
        logger.info(f"Trotter error slope {report.trotter_slope:.3f}")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    """Run a convergence sweep.
    Args:
        argv: Command-line arguments without the program name.

    Returns:
        int: Exit code (0 ok, 2 configuration, 3 resource, 4 numerical, 1 other).
    """
    parser = argparse.ArgumentParser(description="Convergence sweep over dt, epsilon and mode count")
    add_override_flags(parser)
    args = parser.parse_args(argv)
    if args.log_level:
        setup_logging(args.log_level)
    try:
        return asyncio.run(run_sweep(args.config, overrides_from_args(args)))
    except SimulationError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception:
        logger.exception("Unexpected failure")
        return 1


if __name__ == "__main__":
    sys.exit(main())
