"""Workflow toolkit: flow parsing, tree edit metrics and synthetic generation."""

try:
    from ._flowkit import *  # noqa: F401,F403
except ImportError:
    # The CMake tree builds the extension as a top-level module; installed
    # wheels place it inside this package.
    from _flowkit import *  # noqa: F401,F403
