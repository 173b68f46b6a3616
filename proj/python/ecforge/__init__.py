"""Python bindings for the ecforge C++ core."""

from ecforge._ecforge import *  # noqa: F401,F403
from ecforge._ecforge import EcforgeError  # noqa: F401

__version__ = "0.1.0"
