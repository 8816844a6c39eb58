"""Executable diagonalization over countable enumerations of binary sequences."""

try:
    from diaglab._core import *  # noqa: F401,F403
    from diaglab import _core as core  # noqa: F401
except ImportError:  # running against a build tree (module next to sys.path)
    from _core import *  # noqa: F401,F403
    import _core as core  # noqa: F401

__all__ = [n for n in dir(core) if not n.startswith("_")]
