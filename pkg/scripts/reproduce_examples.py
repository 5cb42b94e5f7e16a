#!/usr/bin/env python3
"""Re-derive the worked-example table (thin wrapper over the CLI).

Usage:
    python scripts/reproduce_examples.py [--seed N] [--tol T] [--restarts R] [--iters I]
"""
import sys

from multischmidt.cli import main

if __name__ == "__main__":
    raise SystemExit(main(["reproduce", *sys.argv[1:]]))
