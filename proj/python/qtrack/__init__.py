"""Ising-model track reconstruction with classical and simulated HHL solvers."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
