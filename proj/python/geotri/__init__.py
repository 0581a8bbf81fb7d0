"""Geometric ideal triangulations of drilled cusped hyperbolic 3-manifolds."""

try:
    from ._geotri import *  # noqa: F401,F403
    from ._geotri import __doc__  # noqa: F401
except ImportError:
    # source tree with a plain CMake build directory on sys.path
    from _geotri import *  # noqa: F401,F403
