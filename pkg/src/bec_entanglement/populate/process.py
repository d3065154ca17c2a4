import argparse
import sys

import datajoint as dj

from bec_entanglement import CHECK_DRAWS, CHECK_SEED, SWEEP_N_JOBS
from bec_entanglement.populate.checks import run_checks
from bec_entanglement.populate.sweep import (
    SWEEP_COLUMNS,
    SweepRow,
    parse_grid_assignments,
    run_figure_sweep,
)
from bec_entanglement.utils.config import parse_config, parse_overrides
from bec_entanglement.utils.export import emit_csv

logger = dj.logger

# -------- Subcommands --------
configured_commands = {
    "fig2": "fig2",
    "fig3": "fig3",
    "fig4": "fig4",
    "fig5": "fig5",
    "sweep": "generic",
    "check": None,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bec_entanglement",
        description="Entanglement of two Bragg-probed condensates after a coincidence",
    )
    parser.add_argument("command", choices=list(configured_commands))
    parser.add_argument("--config", help="JSON (or YAML) run configuration")
    parser.add_argument("--out", help="output CSV path; stdout when omitted")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config field (repeatable)",
    )
    parser.add_argument("--tau-max", type=float, help="end of the τ grid (tau_stop)")
    parser.add_argument(
        "--grid",
        action="append",
        default=[],
        help="fig5: η grid (start:stop:step or a,b,c); sweep: name=values",
    )
    parser.add_argument("--n-jobs", type=int, default=SWEEP_N_JOBS)
    parser.add_argument("--seed", type=int, default=CHECK_SEED, help="check: RNG seed")
    parser.add_argument(
        "--draws", type=int, default=CHECK_DRAWS, help="check: draws per suite"
    )
    return parser


def run(**kwargs) -> int:
    """Run one subcommand; returns the process exit code."""
    command = kwargs["command"]
    try:
        overrides = parse_overrides(kwargs.get("overrides"))
        if kwargs.get("tau_max") is not None:
            overrides["tau_stop"] = kwargs["tau_max"]
        config = parse_config(kwargs.get("config"), overrides)

        if command == "check":
            results = run_checks(
                seed=kwargs.get("seed", CHECK_SEED),
                draws=kwargs.get("draws", CHECK_DRAWS),
            )
            text = emit_csv(results, out=kwargs.get("out"))
            exit_code = 0 if all(result.passed for result in results) else 1
        else:
            figure = configured_commands[command]
            grid = parse_grid_assignments(kwargs.get("grid"), figure)
            rows: list[SweepRow] = run_figure_sweep(
                config, figure, grid=grid, n_jobs=kwargs.get("n_jobs")
            )
            text = emit_csv(rows, columns=SWEEP_COLUMNS, out=kwargs.get("out"))
            exit_code = 0
    except Exception as err:
        logger.error(f'"{command}" failed: {type(err).__name__}: {err}')
        return 1

    if kwargs.get("out") is None:
        sys.stdout.write(text)
    return exit_code


def cli(argv=None):
    """
    Calls :func:`run` passing the CLI arguments extracted from `sys.argv`
    This function can be used as entry point to create console scripts with setuptools.
    """
    args = build_parser().parse_args(sys.argv[1:] if argv is None else argv)
    sys.exit(run(**vars(args)))


if __name__ == "__main__":
    cli()
