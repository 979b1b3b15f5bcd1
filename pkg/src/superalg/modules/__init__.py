"""Intermediate-series modules: specs, built-ins, submodules and intertwiners."""
