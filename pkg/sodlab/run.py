#!/usr/bin/env python3
"""
Workbench Runner - Simple script to run the sodlab command line
"""

import sys
import os


def main():
    """Main runner function."""
    sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
    try:
        from src.cli import main as cli_main
    except ImportError as e:
        print(f"Error: could not import the workbench: {e}")
        print("Install the requirements and run this from the sodlab directory")
        sys.exit(1)

    try:
        sys.exit(cli_main(sys.argv[1:]))
    except KeyboardInterrupt:
        print("Interrupted")
        sys.exit(130)


if __name__ == "__main__":
    main()
