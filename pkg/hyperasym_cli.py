#!/usr/bin/env python3
"""
hyperasym launcher for running from a source checkout without installing.

Usage:
  python hyperasym_cli.py table --preset table1 --format md
"""

import os
import sys

# Add src directory to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "src"))

from hyperasym.main import main  # noqa: E402

if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\nOperation cancelled by user", file=sys.stderr)
        sys.exit(1)
