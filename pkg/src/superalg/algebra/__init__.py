"""Graded superalgebras defined by structure-constant rules."""
