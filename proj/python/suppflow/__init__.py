"""Anisotropic support-function flow toolkit."""

try:
    from ._suppflow import *  # noqa: F401,F403  (installed layout)
    from ._suppflow import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension sits next to the package
    from _suppflow import *  # noqa: F401,F403
    from _suppflow import __version__  # noqa: F401
