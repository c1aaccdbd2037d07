"""
Entry point for running the gricci CLI as a module.

Usage:
    python -m gricci.cli ricci --preset su2_double
"""

from gricci.cli.main import main

if __name__ == "__main__":
    main()
