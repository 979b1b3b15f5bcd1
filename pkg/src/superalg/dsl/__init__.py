"""Text definitions of algebras and modules."""

from .parser import parse, parse_file, parse_guard
from .render import render, render_algebra, render_module

__all__ = ["parse", "parse_file", "parse_guard", "render", "render_algebra", "render_module"]
