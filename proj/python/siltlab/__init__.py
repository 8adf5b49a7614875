"""Self-intersection local times of lattice random walks."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, run  # noqa: F401
