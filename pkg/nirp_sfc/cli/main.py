import argparse
import sys
from typing import Optional, Sequence

from nirp_sfc.cli.commands import COMMANDS
from nirp_sfc.cli.handler import EXIT_OK, EXIT_USAGE
from nirp_sfc.configuration import ConfigurationError, LogLevel
from nirp_sfc.instrumentation import (
    Instrumentation,
    JsonLogger,
    SimulationInstrumentation,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nirp-sfc",
        description="Stock-flow consistent Keen model with a public sector",
    )
    parser.add_argument(
        "--seedless",
        action="store_true",
        help="accepted for compatibility; every run is deterministic",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command in COMMANDS:
        subparser = subparsers.add_parser(command.name, help=command.help)
        command.configure(subparser)
        subparser.add_argument(
            "--seedless",
            action="store_true",
            default=argparse.SUPPRESS,
            help=argparse.SUPPRESS,
        )
        subparser.set_defaults(command_class=command)

    return parser


def cli(
    argv: Optional[Sequence[str]] = None,
    instrumentation: Optional[Instrumentation] = None,
) -> int:
    """Run one command and return its exit code"""
    parser = build_parser()
    try:
        arguments = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if instrumentation is None:
        try:
            level = LogLevel().level
        except ConfigurationError as e:
            sys.stderr.write(f"{e}\n")
            return EXIT_USAGE
        instrumentation = SimulationInstrumentation(logger=JsonLogger(level=level))

    command = arguments.command_class(instrumentation=instrumentation)
    return command(arguments)


def main() -> None:
    sys.exit(cli())
