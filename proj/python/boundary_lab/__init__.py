"""Python access to the boundary-lab core.

Words are strings over a, b, ... with capitals for inverses. Boundary points
are (head, period) pairs of words, standing for head followed by period
repeated forever.
"""

from ._core import (
    CapExceeded,
    ConformalDensity,
    GroupModel,
    InvariantViolation,
    __version__,
    critical_exponent,
    run,
    subcommands,
)

__all__ = [
    "CapExceeded",
    "ConformalDensity",
    "GroupModel",
    "InvariantViolation",
    "__version__",
    "critical_exponent",
    "run",
    "subcommands",
]
