"""Exact symbolic workbench for graded Lie superalgebras and their
intermediate-series modules."""

__version__ = "0.1.0"
