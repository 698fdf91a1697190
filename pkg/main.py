"""Entry point for the km-lab command-line harness."""

import sys

from cli.app import run


def main():
    """Run the command-line harness."""
    sys.exit(run())


if __name__ == "__main__":
    main()
