"""
secsel Command-Line Entry Point

This is the main file that starts a secsel run. It hands the command line to
secsel.cli, which:
- parses the global options and the subcommand
- configures logging and the worker pool
- runs the subcommand and prints its JSON report

Examples:
    python main.py generate toy --n 4 --samples 1000 --scales 1 1 2 2 --out runs/toy
    python main.py select --data runs/toy --objective dd --gamma 0.3 --budget 2
    python main.py repro torus

`python -m secsel ...` does the same thing.
"""

import sys

from secsel.cli import main

# Run the application
# This code only runs if you execute this file directly
if __name__ == "__main__":
    sys.exit(main())
