from .fidelity import (
    fidelity_direct,
    fidelity_encoded_ideal,
    fidelity_encoded_semianalytic,
    fidelity_erasure_direct,
    fidelity_qubit_repetition,
)
from .misclassification import CLASSES, MisclassificationMatrix, classification_frequencies_mc, misclassification_probs
from .monte_carlo import estimate_direct_mc, estimate_fidelity_mc, excess_noise_mc, summarize
from .sweep import evaluate_point, sweep

__all__ = [
    "CLASSES",
    "MisclassificationMatrix",
    "classification_frequencies_mc",
    "estimate_direct_mc",
    "estimate_fidelity_mc",
    "evaluate_point",
    "excess_noise_mc",
    "fidelity_direct",
    "fidelity_encoded_ideal",
    "fidelity_encoded_semianalytic",
    "fidelity_erasure_direct",
    "fidelity_qubit_repetition",
    "misclassification_probs",
    "summarize",
    "sweep",
]
