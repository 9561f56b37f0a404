import math

from mixtures import Displacement, GaussianMixture, map_components
from models import SyndromeClass
from utils.errors import DimensionMismatchError

# class -> (ancilla whose outcome drives the feedforward, gain on that outcome)
FEEDFORWARD: dict[SyndromeClass, tuple[int | None, float]] = {
    SyndromeClass.NO_ERROR: (None, 0.0),
    SyndromeClass.E1: (2, -1.0 / math.sqrt(2.0)),
    SyndromeClass.E2: (3, -math.sqrt(2.0 / 3.0)),
    SyndromeClass.E3: (3, math.sqrt(2.0 / 3.0)),
    SyndromeClass.E12: (3, -2.0 * math.sqrt(2.0 / 3.0)),
    SyndromeClass.E13: (3, 2.0 * math.sqrt(2.0 / 3.0)),
    SyndromeClass.E23: (2, math.sqrt(2.0)),
}


def feedforward_gain(cls: SyndromeClass) -> tuple[int | None, float]:
    """
    Ancilla mode whose x-outcome drives the correction of `cls`, and the gain on it.

    Example:
        >>> feedforward_gain(SyndromeClass.E23)[0]
        2
    """
    return FEEDFORWARD[cls]


def feedforward_displacement(cls: SyndromeClass, x2: float, x3: float) -> float:
    """x-displacement applied to the signal mode for class `cls` and outcomes (x2, x3)."""
    axis, gain = feedforward_gain(cls)
    if axis is None:
        return 0.0
    return gain * (x2 if axis == 2 else x3)


def residual_variance(cls: SyndromeClass, r: float) -> float:
    """
    Output x-variance of the recovered signal for a correctly identified branch.

    The vacuum variance 1/4 plus the ancilla noise g^2 e^{-2r}/4 fed forward with gain g.
    """
    _, gain = feedforward_gain(cls)
    return 0.25 + gain**2 * math.exp(-2.0 * r) / 4.0


def recover(mode1: GaussianMixture, cls: SyndromeClass, x2: float, x3: float) -> GaussianMixture:
    """
    Feedforward correction of the signal mode; only the x-quadrature is displaced.

    Raises:
        DimensionMismatchError: If `mode1` is not single-mode.
    """
    if mode1.n != 1:
        raise DimensionMismatchError(f"Recovery acts on the single signal mode, got {mode1.n} modes")
    shift = feedforward_displacement(cls, x2, x3)
    if shift == 0.0:
        return mode1
    return map_components(mode1, Displacement(0, shift))
