"""Rips and degree-Rips homotopy toolkit."""

try:
    from ._ripshom import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _ripshom import *  # noqa: F401,F403  (in-tree build)
