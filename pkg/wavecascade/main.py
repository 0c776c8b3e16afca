"""CLI entry point: dispatches wavecascade subcommands."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional

from wavecascade.errors import ConfigError, InvalidInputError, WaveCascadeError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_INTERRUPTED = 130

_COMMANDS = ("simulate", "compare", "sweep", "dn-study", "taylor-check")


def build_parser() -> argparse.ArgumentParser:
    from wavecascade.commands import get_version

    parser = argparse.ArgumentParser(
        prog="wavecascade",
        description="Water-waves solver, asymptotic models and convergence studies",
    )
    parser.add_argument("--version", action="version", version=f"wavecascade {get_version()}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    helps = {
        "simulate": "Integrate one model and write diagnostics and snapshots",
        "compare": "Measure a model against the water-waves reference over a sweep",
        "sweep": "Run the reference solver alone with its dt-halving self-check",
        "dn-study": "Measure DN expansion remainders against the elliptic solve",
        "taylor-check": "Check the Taylor sign condition of the initial data",
    }
    for name in _COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", required=True, help="Experiment file (TOML)")
        p.add_argument("--out", default=None, help="Output directory (default: experiment.out_dir)")
        p.add_argument(
            "--threads", type=int, default=None,
            help="Worker threads for sweep points (default: $WAVECASCADE_THREADS or 1)",
        )
        p.add_argument("--seed", type=int, default=None, help="Seed of the initial-data noise (default: 0)")
        p.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)-5s [%(name)s] %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )


def _dispatch(args) -> int:
    if args.command == "simulate":
        from wavecascade.commands.simulate import cmd_simulate

        return cmd_simulate(args)
    if args.command == "compare":
        from wavecascade.commands.compare import cmd_compare

        return cmd_compare(args)
    if args.command == "sweep":
        from wavecascade.commands.sweep import cmd_sweep

        return cmd_sweep(args)
    if args.command == "dn-study":
        from wavecascade.commands.dn_study import cmd_dn_study

        return cmd_dn_study(args)
    from wavecascade.commands.taylor_check import cmd_taylor_check

    return cmd_taylor_check(args)


def run(argv: Optional[list[str]] = None) -> int:
    """Parse argv, run the subcommand and map failures to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_OK
    _configure_logging(args.verbose)
    try:
        return _dispatch(args)
    except (ConfigError, InvalidInputError) as e:
        print(f"wavecascade: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except WaveCascadeError as e:
        print(f"wavecascade: {e.kind}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except KeyboardInterrupt:
        sys.stderr.write("\n")
        return EXIT_INTERRUPTED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
