"""
gricci CLI - command-line front-end.

Usage:
    # Run as console script
    gricci ricci --preset su2_double --metric subalgebra

    # Or as a module
    python -m gricci.cli flow --preset abelian:2,2 --s 0:1

    # Or programmatically
    from gricci.cli import run
    exit_code = run(["validate", "--preset", "su2"])
"""

from gricci.cli.main import build_parser, main, run

__all__ = ["build_parser", "main", "run"]
