"""Allow running the command line interface as `python -m rcopselect`."""

import sys

from rcopselect.cli import main

if __name__ == "__main__":
    sys.exit(main())
