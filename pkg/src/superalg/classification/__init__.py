"""Constraint analysis for modules whose even and odd parts are A_{a,b}."""
