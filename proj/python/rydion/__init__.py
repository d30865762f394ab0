"""Rydberg-ion spectroscopy toolkit (python bindings for the C++ core)."""

try:
    from ._rydion import *  # noqa: F401,F403  (installed package layout)
    from ._rydion import __version__  # noqa: F401
except ImportError:  # in-tree development: extension on PYTHONPATH
    from _rydion import *  # noqa: F401,F403
    from _rydion import __version__  # noqa: F401
