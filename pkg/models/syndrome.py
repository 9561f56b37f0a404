from enum import Enum


class SyndromeClass(str, Enum):
    """
    Error hypothesis assigned from the two ancilla outcomes.

    The all-three error pattern yields the same syndrome as no error and is reported
    as `NO_ERROR`.
    """

    NO_ERROR = "NoError"
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E12 = "E12"
    E13 = "E13"
    E23 = "E23"


class Sign(str, Enum):
    MINUS = "-"
    ZERO = "0"
    PLUS = "+"


class Policy(str, Enum):
    """
    Classification policy.

    THRESHOLD reads the sign table with nearest-mean midpoint thresholds; MAP picks
    the hypothesis with the largest prior times likelihood.
    """

    THRESHOLD = "threshold"
    MAP = "map"
