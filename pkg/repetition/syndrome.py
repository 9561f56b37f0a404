import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from channels import ERROR_PATTERNS
from models import CodeParams, Policy, Sign, SyndromeClass
from phase_space import tritter_matrix

PATTERN_CLASSES: dict[tuple[int, ...], SyndromeClass] = {
    (): SyndromeClass.NO_ERROR,
    (0,): SyndromeClass.E1,
    (1,): SyndromeClass.E2,
    (2,): SyndromeClass.E3,
    (0, 1): SyndromeClass.E12,
    (0, 2): SyndromeClass.E13,
    (1, 2): SyndromeClass.E23,
    (0, 1, 2): SyndromeClass.NO_ERROR,
}

SIGN_TABLE: dict[tuple[Sign, Sign], SyndromeClass] = {
    (Sign.ZERO, Sign.ZERO): SyndromeClass.NO_ERROR,
    (Sign.PLUS, Sign.ZERO): SyndromeClass.E1,
    (Sign.MINUS, Sign.PLUS): SyndromeClass.E2,
    (Sign.MINUS, Sign.MINUS): SyndromeClass.E3,
    (Sign.PLUS, Sign.PLUS): SyndromeClass.E12,
    (Sign.PLUS, Sign.MINUS): SyndromeClass.E13,
    (Sign.MINUS, Sign.ZERO): SyndromeClass.E23,
}


@dataclass(frozen=True)
class Hypothesis:
    """
    One error pattern as seen by the syndrome measurement.

    Attributes:
        pattern (tuple[int, ...]): Channels in error.
        prior (float): gamma^k (1 - gamma)^(3 - k).
        mean (tuple[float, float]): Expected outcomes of ancillas 2 and 3.
        cls (SyndromeClass): Class reported when this hypothesis is chosen.
    """

    pattern: tuple[int, ...]
    prior: float
    mean: tuple[float, float]
    cls: SyndromeClass

    @property
    def log_prior(self) -> float:
        return math.log(self.prior) if self.prior > 0 else -math.inf


@lru_cache(maxsize=256)
def hypotheses(params: CodeParams) -> tuple[Hypothesis, ...]:
    """The eight error hypotheses under the decoder's assumed displacement."""
    T = tritter_matrix()
    xbar = params.decoder_xbar2
    out = []
    for pattern in ERROR_PATTERNS:
        shift = xbar * T[list(pattern)].sum(axis=0) if pattern else np.zeros(3)
        k = len(pattern)
        out.append(
            Hypothesis(
                pattern=pattern,
                prior=params.gamma**k * (1.0 - params.gamma) ** (3 - k),
                mean=(float(shift[1]), float(shift[2])),
                cls=PATTERN_CLASSES[pattern],
            )
        )
    return tuple(out)


def thresholds(params: CodeParams) -> tuple[float, float]:
    """Midpoints between zero and the nearest nonzero hypothesis mean on each ancilla axis."""
    xbar = params.decoder_xbar2
    return xbar / (2.0 * math.sqrt(6.0)), xbar / (2.0 * math.sqrt(2.0))


def _sign(value: float, threshold: float) -> Sign:
    if value > threshold:
        return Sign.PLUS
    if value < -threshold:
        return Sign.MINUS
    return Sign.ZERO


def sign_pair(x2: float, x3: float, params: CodeParams) -> tuple[Sign, Sign]:
    t2, t3 = thresholds(params)
    return _sign(x2, t2), _sign(x3, t3)


def map_scores(x2: float, x3: float, params: CodeParams) -> np.ndarray:
    """Log prior plus log likelihood of (x2, x3) for each hypothesis, up to a common constant."""
    var = params.syndrome_variance
    return np.array(
        [h.log_prior - ((x2 - h.mean[0]) ** 2 + (x3 - h.mean[1]) ** 2) / (2.0 * var) for h in hypotheses(params)]
    )


def most_likely(x2: float, x3: float, params: CodeParams) -> SyndromeClass:
    return hypotheses(params)[int(np.argmax(map_scores(x2, x3, params)))].cls


def class_priors(params: CodeParams) -> dict[SyndromeClass, float]:
    priors = dict.fromkeys(SyndromeClass, 0.0)
    for h in hypotheses(params):
        priors[h.cls] += h.prior
    return priors


def classify(x2: float, x3: float, params: CodeParams, policy: Policy = Policy.THRESHOLD) -> SyndromeClass:
    """
    Assign an error class to the ancilla outcomes (x2, x3).

    THRESHOLD maps each outcome to a sign with thresholds xbar2/(2 sqrt 6) and
    xbar2/(2 sqrt 2) and reads the sign table; sign pairs outside the table, and
    table entries whose class has zero prior probability, fall back to the most
    likely hypothesis. MAP maximizes prior times likelihood over all eight
    hypotheses. Either way the all-three pattern is reported as NO_ERROR.

    Args:
        x2 (float): Outcome of ancilla mode 2.
        x3 (float): Outcome of ancilla mode 3.
        params (CodeParams): Code parameters; the decoder's assumed x-displacement is used.
        policy (Policy): Classification policy.

    Returns:
        SyndromeClass: The assigned class.

    Example:
        >>> params = CodeParams(r=2.0, xbar2=3.0, gamma=0.1)
        >>> classify(math.sqrt(2 / 3) * 3.0, 0.0, params)
        <SyndromeClass.E1: 'E1'>
    """
    if policy == Policy.MAP:
        return most_likely(x2, x3, params)
    cls = SIGN_TABLE.get(sign_pair(x2, x3, params))
    if cls is None or class_priors(params)[cls] == 0.0:
        return most_likely(x2, x3, params)
    return cls
