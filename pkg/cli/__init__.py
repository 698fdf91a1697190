"""CLI module - argument parsing and command dispatch for km-lab."""

from cli.app import COMMANDS, build_parser, run

__all__ = ["COMMANDS", "build_parser", "run"]
