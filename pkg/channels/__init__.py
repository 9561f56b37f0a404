from .stochastic import (
    ERROR_PATTERNS,
    apply_channel,
    apply_independent,
    branch_table,
    erasure_channel,
    x_displacement_channel,
)

__all__ = [
    "ERROR_PATTERNS",
    "apply_channel",
    "apply_independent",
    "branch_table",
    "erasure_channel",
    "x_displacement_channel",
]
