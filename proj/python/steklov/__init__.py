"""Dirichlet-to-Neumann maps of planar domains and the boundary identities built on them."""

from ._steklov import *  # noqa: F401,F403
from ._steklov import SteklovError, __version__  # noqa: F401
