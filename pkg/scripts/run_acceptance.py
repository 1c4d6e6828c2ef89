#!/usr/bin/env python3
"""Run every acceptance check and print one PASS/FAIL line each."""

import sys

from kleene.acceptance import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
