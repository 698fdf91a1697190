"""Allow ``python -m cli``."""

import sys

from cli.app import run


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
