"""Python bindings for the dyadkit experiment library."""

from ._dyadkit import *  # noqa: F401,F403
from ._dyadkit import __version__, run, run_csv, subcommands

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
