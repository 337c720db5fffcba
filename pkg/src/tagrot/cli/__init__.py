"""Command-line interface for tagrot."""

from .runner import COMMANDS, SUITES, ExitCode, build_parser, main

__all__ = ["COMMANDS", "SUITES", "ExitCode", "build_parser", "main"]
