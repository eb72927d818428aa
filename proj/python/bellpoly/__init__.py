"""Exact-arithmetic workbench for correlator Bell polytopes.

Vertices and facets of the local-hidden-variable polytope, symmetry
classification, the named inequality catalog, non-signaling uniqueness,
the see-saw quantum lower-bound optimizer, and input pre-processing.
"""

try:
    # wheel layout: the compiled module is installed inside this package
    from ._bellpoly import *  # noqa: F401,F403
    from ._bellpoly import __doc__ as _core_doc  # noqa: F401
except ImportError:
    # build-tree layout: the compiled module sits on PYTHONPATH
    from _bellpoly import *  # noqa: F401,F403

__version__ = "1.0.0"
