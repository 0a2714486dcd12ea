"""Exact deformation cohomology of finite Gray semigroups."""

__version__ = "0.1.0"
