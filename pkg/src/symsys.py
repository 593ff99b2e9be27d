""" symsys.py
    Driver for the symmetric-system toolkit: Weyl functions, characteristic
    matrices, generalized resolvents, eigenvalue scans and the verification
    suite, all run from a JSON problem config.

    USAGE: symsys.py --mode weyl|charmat|resolve|eig|verify
                (--config PATH | --builtin NAME) [--out DIR] [--workers N]
                [--seed K] [--tol-override KEY=VAL ...] [--debug]
           symsys.py --list-builtins
    Parameters:
        --mode: command to run.
        --config: JSON problem config.
        --builtin: run a catalog entry with its default τ and λ-grid.
        --out: artifact directory (default $SYMSYS_OUTPUT_DIR or <project>/output/<mode>).
        --workers: threads for λ-sweeps (results do not depend on it).
        --seed: seed for random right-hand sides and T_max pairs.
        --tol-override: KEY=VAL, repeatable (see modules/utils/tolerances.py).
        --debug: log at DEBUG level.
    Exit codes: 0 all checks pass, 1 numeric check failure, 2 config error.
"""

import sys
import argparse
from pathlib import Path

from modules.cli.commands import Command, run
from modules.cli.config import builtin_config, load_config
from modules.systems.builtins import builtin_names, builtin_resource
from modules.utils.errors import ConfigError, SymSysError
from modules.utils.log_utils import LogConfig, configure_logging, get_logger

# -----------------------------
# Logging setup
# -----------------------------

configure_logging()
logger = get_logger(__name__)

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_CONFIG = 2


def workers_type(value: str) -> int:
    """ Custom argparse type that validates the worker count. """
    try:
        n = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"workers must be an integer, got {value!r}") from e
    if not 1 <= n <= 64:
        raise argparse.ArgumentTypeError(f"workers must be between 1 and 64 (got {n})")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Weyl functions, characteristic matrices and generalized resolvents "
                    "of symmetric first-order systems."
    )
    parser.add_argument("--mode",
        choices=[c.value for c in Command],
        type=str.lower,
        help="Command to run: " + Command.help_text() + "."
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", type=Path, help="JSON problem config.")
    source.add_argument("--builtin", type=str, help="Built-in problem name (see --list-builtins).")
    parser.add_argument("--out", type=Path, default=None, help="Artifact directory.")
    parser.add_argument("--workers", type=workers_type, default=None,
                        help="Worker threads for λ-sweeps (default from config, else 1).")
    parser.add_argument("--seed", type=int, default=None, help="Random seed (default from config, else 0).")
    parser.add_argument("--tol-override", action="append", default=[], metavar="KEY=VAL",
                        help="Override one tolerance; repeatable.")
    parser.add_argument("--list-builtins", action="store_true", help="Print the built-in catalog and exit.")
    parser.add_argument("--debug", action="store_true", help="Log at DEBUG level.")
    return parser


def list_builtins() -> None:
    for name in builtin_names():
        print(f"{name:24s} {builtin_resource(name).get('description', '')}")


def main(argv: list[str] | None = None) -> int:
    """ Main entry point: parse arguments, run one command, map the outcome to an exit code. """
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv

    # Show help if no arguments are given
    if not argv:
        parser.print_help()
        return EXIT_CONFIG

    args = parser.parse_args(argv)
    if args.debug:
        configure_logging(LogConfig(level="DEBUG"), force=True)

    if args.list_builtins:
        list_builtins()
        return EXIT_OK
    if args.mode is None or (args.config is None and args.builtin is None):
        logger.error("🛑 --mode and one of --config/--builtin are required.")
        return EXIT_CONFIG

    try:
        config = load_config(args.config) if args.config else builtin_config(args.builtin)
        result = run(args.mode, config, out=args.out, workers=args.workers, seed=args.seed,
                     tol_overrides=args.tol_override)
    except ConfigError as exc:
        logger.error("❌ [%s] %s", exc.provenance, exc)
        return EXIT_CONFIG
    except SymSysError as exc:
        logger.error("❌ [%s] %s", exc.provenance, exc)
        return EXIT_NUMERIC

    for path in result.artifacts:
        logger.info("ℹ    %s", path)
    return EXIT_OK if result.passed else EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
