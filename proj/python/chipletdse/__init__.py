"""Chiplet design-space exploration: cost, power, performance, PHY, thermal and placement."""

from ._core import *  # noqa: F401,F403
from ._core import (
    CongestionError,
    DomainError,
    Error,
    ParseError,
    SolverError,
    ValidationError,
)

__version__ = "0.1.0"
