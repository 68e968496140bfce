#!/usr/bin/env python
"""Command-line utility for basis-sequence reconfiguration."""
import sys


def main():
    """Run a reconf subcommand."""
    try:
        from basis_reconf.cli import main as run
    except ImportError as exc:
        raise ImportError(
            "Couldn't import basis_reconf. Are its requirements installed and "
            "is this directory on your PYTHONPATH? Did you forget to activate "
            "the virtual environment?"
        ) from exc
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
