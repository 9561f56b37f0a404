from .encoding import decode, encode
from .protocol import RepetitionCodeProtocol, ideal_output, run_protocol
from .recovery import FEEDFORWARD, feedforward_displacement, feedforward_gain, recover, residual_variance
from .syndrome import (
    PATTERN_CLASSES,
    SIGN_TABLE,
    Hypothesis,
    class_priors,
    classify,
    hypotheses,
    map_scores,
    most_likely,
    sign_pair,
    thresholds,
)

__all__ = [
    "FEEDFORWARD",
    "Hypothesis",
    "PATTERN_CLASSES",
    "RepetitionCodeProtocol",
    "SIGN_TABLE",
    "class_priors",
    "classify",
    "decode",
    "encode",
    "feedforward_displacement",
    "feedforward_gain",
    "hypotheses",
    "ideal_output",
    "map_scores",
    "most_likely",
    "recover",
    "residual_variance",
    "run_protocol",
    "sign_pair",
    "thresholds",
]
