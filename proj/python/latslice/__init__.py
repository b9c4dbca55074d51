"""Slicing and dimension counting for 1-separated planar point sets.

Thin re-export of the compiled ``_latslice`` module. Reports and profiles
come back as plain dicts.
"""

from ._latslice import *  # noqa: F401,F403
from ._latslice import ConfigError, InvariantViolation, IoError, run  # noqa: F401

__version__ = "0.3.0"
