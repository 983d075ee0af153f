"""CHSH Bell-test simulator for deterministic local hidden-variable models."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, RNG_ALGORITHM  # noqa: F401
