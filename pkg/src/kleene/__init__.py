"""Computability workbench: register machine, Goedel numbering, s-m-n
specialization, Kleene fixed points, finite diagonalization and a coupled
oscillator back-action model."""

import sys

# program indices routinely run to tens of thousands of decimal digits
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

__version__ = "0.1.0"
