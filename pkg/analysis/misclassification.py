import math
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np
from loguru import logger
from scipy.integrate import quad_vec
from scipy.special import ndtr

from channels import ERROR_PATTERNS, branch_table
from models import CodeParams, Policy, Sign, SyndromeClass
from repetition import PATTERN_CLASSES, SIGN_TABLE, class_priors, classify, hypotheses, thresholds
from utils.errors import DomainError
from utils.streams import run_streams

CLASSES: tuple[SyndromeClass, ...] = tuple(SyndromeClass)
# outcomes farther than this many standard deviations from the mean carry no mass worth integrating
TAIL_SIGMAS = 12.0


@dataclass(frozen=True)
class MisclassificationMatrix:
    """
    Probability of each assigned class given each true error pattern.

    Attributes:
        patterns (tuple[tuple[int, ...], ...]): Row labels, the eight error patterns.
        classes (tuple[SyndromeClass, ...]): Column labels, the seven syndrome classes.
        probs (np.ndarray): 8 x 7 matrix; each row sums to one.
        stderr (np.ndarray | None): Standard errors when the matrix is a Monte Carlo estimate.
    """

    patterns: tuple[tuple[int, ...], ...]
    classes: tuple[SyndromeClass, ...]
    probs: np.ndarray
    stderr: np.ndarray | None = field(default=None)

    def row(self, pattern: tuple[int, ...]) -> np.ndarray:
        return self.probs[self.patterns.index(tuple(pattern))]

    def probability(self, pattern: tuple[int, ...], cls: SyndromeClass) -> float:
        return float(self.row(pattern)[self.classes.index(cls)])

    def correct_probability(self, pattern: tuple[int, ...]) -> float:
        """Probability that `pattern` is assigned the class whose recovery undoes it."""
        return self.probability(pattern, PATTERN_CLASSES[tuple(pattern)])

    def diagonal(self) -> dict[tuple[int, ...], float]:
        return {pattern: self.correct_probability(pattern) for pattern in self.patterns}


def _sign_interval(sign: Sign, threshold: float) -> tuple[float, float]:
    if sign == Sign.MINUS:
        return -math.inf, -threshold
    if sign == Sign.PLUS:
        return threshold, math.inf
    return -threshold, threshold


def _gaussian_mass(lo: float, hi: float, mean: float, std: float) -> float:
    if hi <= lo:
        return 0.0
    return float(ndtr((hi - mean) / std) - ndtr((lo - mean) / std))


class _MapRegions:
    """
    Masses of the MAP decision regions inside an axis-aligned box.

    For a fixed x2 every hypothesis score is a line in x3, so the winning class
    is constant between consecutive pairwise crossings. The inner x3 integral is
    therefore a sum of normal interval masses and only the outer x2 integral is
    done numerically.
    """

    def __init__(self, params: CodeParams):
        var = params.syndrome_variance
        live = [h for h in hypotheses(params) if h.prior > 0.0]
        self.offset = np.array([h.log_prior - (h.mean[0] ** 2 + h.mean[1] ** 2) / (2.0 * var) for h in live])
        self.slope2 = np.array([h.mean[0] / var for h in live])
        self.slope3 = np.array([h.mean[1] / var for h in live])
        self.columns = np.array([CLASSES.index(h.cls) for h in live])
        pairs = [(i, j) for i, j in combinations(range(len(live)), 2) if self.slope3[i] != self.slope3[j]]
        self.first = np.array([i for i, _ in pairs], dtype=int)
        self.second = np.array([j for _, j in pairs], dtype=int)

    def _x3_masses(self, x2: float, lo3: float, hi3: float, mean3: float, std: float) -> np.ndarray:
        intercept = self.offset + self.slope2 * x2
        cuts = (intercept[self.first] - intercept[self.second]) / (self.slope3[self.second] - self.slope3[self.first])
        edges = np.unique(np.concatenate(([lo3, hi3], cuts[(cuts > lo3) & (cuts < hi3)])))
        lo, hi = edges[:-1], edges[1:]
        with np.errstate(invalid="ignore"):
            interior = np.where(np.isinf(lo), hi - 1.0, np.where(np.isinf(hi), lo + 1.0, 0.5 * (lo + hi)))
        interior = np.where(np.isinf(lo) & np.isinf(hi), 0.0, interior)
        winners = self.columns[np.argmax(intercept[None, :] + self.slope3[None, :] * interior[:, None], axis=1)]
        masses = np.zeros(len(CLASSES))
        np.add.at(masses, winners, ndtr((hi - mean3) / std) - ndtr((lo - mean3) / std))
        return masses

    def box_masses(
        self,
        box2: tuple[float, float],
        box3: tuple[float, float],
        mean: tuple[float, float],
        std: float,
    ) -> np.ndarray:
        """Per-class probability that outcomes drawn around `mean` land in the box and win there."""
        lo2 = max(box2[0], mean[0] - TAIL_SIGMAS * std)
        hi2 = min(box2[1], mean[0] + TAIL_SIGMAS * std)
        if hi2 <= lo2:
            return np.zeros(len(CLASSES))
        norm = 1.0 / (std * math.sqrt(2.0 * math.pi))

        def integrand(x2):
            weight = norm * math.exp(-0.5 * ((x2 - mean[0]) / std) ** 2)
            return weight * self._x3_masses(x2, box3[0], box3[1], mean[1], std)

        result, _ = quad_vec(integrand, lo2, hi2, epsabs=1e-13, epsrel=1e-11, limit=4000)
        return np.asarray(result)


def misclassification_probs(params: CodeParams, policy: Policy = Policy.THRESHOLD) -> MisclassificationMatrix:
    """
    Closed-form confusion matrix of the syndrome classifier.

    Ancilla outcomes of each true pattern are independent normals with variance
    e^{-2r}/4 around the pattern's decoded shifts, computed with the channel's
    actual displacement, while the decision regions use the decoder's assumed one.
    Sign-table cells are axis-aligned boxes and contribute products of normal
    interval masses; cells resolved by the most-likely fallback, and the whole
    plane under the MAP policy, are integrated over the MAP regions.

    Args:
        params (CodeParams): Code parameters.
        policy (Policy): Classification policy.

    Returns:
        MisclassificationMatrix: Rows in `ERROR_PATTERNS` order, columns in `SyndromeClass` order.

    Example:
        >>> matrix = misclassification_probs(CodeParams(r=0.0, xbar2=10.0, gamma=0.1))
        >>> matrix.correct_probability((0,)) > 0.999
        True
    """
    policy = Policy(policy)
    std = math.sqrt(params.syndrome_variance)
    regions = _MapRegions(params)
    priors = class_priors(params)
    t2, t3 = thresholds(params)
    probs = np.zeros((len(ERROR_PATTERNS), len(CLASSES)))
    everywhere = (-math.inf, math.inf)

    for row, record in enumerate(branch_table(params.gamma, params.xbar2)):
        mean = record.ancilla_shifts
        if policy == Policy.MAP:
            probs[row] = regions.box_masses(everywhere, everywhere, mean, std)
            continue
        for s2, s3 in product(Sign, Sign):
            box2, box3 = _sign_interval(s2, t2), _sign_interval(s3, t3)
            cls = SIGN_TABLE.get((s2, s3))
            if cls is not None and priors[cls] > 0.0:
                probs[row, CLASSES.index(cls)] += _gaussian_mass(*box2, mean[0], std) * _gaussian_mass(
                    *box3, mean[1], std
                )
            else:
                probs[row] += regions.box_masses(box2, box3, mean, std)

    row_error = float(np.max(np.abs(probs.sum(axis=1) - 1.0)))
    logger.debug(f"Misclassification matrix for {params!r} under {policy.value}: max row error {row_error:.2e}")
    return MisclassificationMatrix(patterns=ERROR_PATTERNS, classes=CLASSES, probs=probs)


def classification_frequencies_mc(
    params: CodeParams, policy: Policy, n_per_branch: int, seed: int
) -> MisclassificationMatrix:
    """
    Empirical confusion matrix: classify `n_per_branch` simulated outcome pairs per true pattern.

    Pattern k draws its outcomes from the stream spawned from (seed, k). Standard errors
    are binomial, sqrt(f (1 - f) / n).

    Raises:
        DomainError: If `n_per_branch` < 1 or the seed is negative.
    """
    if n_per_branch < 1:
        raise DomainError(f"Need at least one sample per branch, got {n_per_branch}")
    if seed < 0:
        raise DomainError(f"Seed must be non-negative, got {seed}")
    policy = Policy(policy)
    std = math.sqrt(params.syndrome_variance)
    counts = np.zeros((len(ERROR_PATTERNS), len(CLASSES)))
    for row, record in enumerate(branch_table(params.gamma, params.xbar2)):
        rng = run_streams(seed, 1, point_index=row)[0]
        x2 = rng.normal(record.ancilla_shifts[0], std, size=n_per_branch)
        x3 = rng.normal(record.ancilla_shifts[1], std, size=n_per_branch)
        for a, b in zip(x2, x3):
            counts[row, CLASSES.index(classify(float(a), float(b), params, policy))] += 1
    freqs = counts / n_per_branch
    return MisclassificationMatrix(
        patterns=ERROR_PATTERNS,
        classes=CLASSES,
        probs=freqs,
        stderr=np.sqrt(freqs * (1.0 - freqs) / n_per_branch),
    )
