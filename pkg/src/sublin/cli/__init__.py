"""Command-line interface: scenes, subcommands and reports."""

from .main import build_parser, main

__all__ = ["build_parser", "main"]
