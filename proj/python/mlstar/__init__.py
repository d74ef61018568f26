"""Normalized Mittag-Leffler functions, their integral operators, and
sampled certificates of starlikeness and convexity orders."""

from ._mlstar import *  # noqa: F401,F403
from ._mlstar import __doc__  # noqa: F401

__version__ = "0.1.0"
