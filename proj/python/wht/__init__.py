"""Weighted multiple hypothesis testing with familywise error control."""

from ._core import *  # noqa: F401,F403
from ._core import Error, DomainError, InfeasibleError, InvariantError, __version__  # noqa: F401
