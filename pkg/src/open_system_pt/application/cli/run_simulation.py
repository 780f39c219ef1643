"""
CLI for a single process-tensor run:
1. Load the TOML configuration and apply flag overrides.
2. Build the model and its process tensor (or load a cached one).
3. Contract and write the time-series CSV and the run summary.
"""

import argparse
import sys
from collections.abc import Sequence
from typing import Any

from open_system_pt.application.services.simulation_service import run_simulation
from open_system_pt.exceptions import SimulationError
from open_system_pt.infrastructure.config_loader import load_config
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()


def add_override_flags(parser: argparse.ArgumentParser) -> None:
    """Flags that override fields of the configuration file."""
    parser.add_argument("config", help="TOML run configuration")
    parser.add_argument("--dt", type=float, help="Time step")
    parser.add_argument("--nmax", type=int, help="Number of time steps")
    parser.add_argument("--epsilon", type=float, help="Relative SVD truncation threshold")
    parser.add_argument("--out", help="Output CSV path")
    parser.add_argument("--seed", type=int, help="Seed of random model parameters")
    parser.add_argument("--pt-cache", help="Process tensor snapshot to load or create")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")


def overrides_from_args(args: argparse.Namespace) -> dict[str, Any]:
    """Map parsed flags onto configuration keys; unset flags are None."""
    return {
        "dt": args.dt,
        "n_max": args.nmax,
        "epsilon": args.epsilon,
        "output_path": args.out,
        "seed": args.seed,
        "pt_cache_path": args.pt_cache,
    }


def main(argv: Sequence[str] | None = None) -> int:
    """Run one simulation.
    Args:
        argv: Command-line arguments without the program name.

    Returns:
        int: Exit code (0 ok, 2 configuration, 3 resource, 4 numerical, 1 other).
    """
    parser = argparse.ArgumentParser(description="Run a process-tensor simulation")
    add_override_flags(parser)
    parser.add_argument(
        "--method", choices=["process_tensor", "dense"], help="Contraction method (dense for checks)"
    )
    args = parser.parse_args(argv)
    if args.log_level:
        setup_logging(args.log_level)

    try:
        overrides = overrides_from_args(args) | {"method": args.method}
        config = load_config(args.config, overrides)
        result = run_simulation(config)
    except SimulationError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception:
        logger.exception("Unexpected failure")
        return 1

    logger.info(
        f"Done: d_max={result.summary.d_max}, trace drift {result.summary.max_trace_drift:.2e}, "
        f"CSV at {config.output_path}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
