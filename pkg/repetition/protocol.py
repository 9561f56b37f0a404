import math
from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy.special import logsumexp

from channels import apply_independent, x_displacement_channel
from mixtures import GaussianMixture, WeightedComponent, condition, fidelity_to_pure, mix, prune, pure
from models import CodeParams, Policy, ProtocolRun
from phase_space import GaussianState, displace, homodyne_update, is_pure
from repetition.encoding import decode, encode
from repetition.recovery import feedforward_displacement, recover
from repetition.syndrome import classify
from utils.errors import ConditioningError, DimensionMismatchError, DomainError, NumericalFailureError


@dataclass(frozen=True)
class ConditioningPlan:
    """
    Outcome-independent conditioning of the decoded mixture on x2 and then x3.

    Row k of every array belongs to component k of the decoded mixture. After x2 the
    kept coordinates are (x1, p1, x3, p3); after x3 only (x1, p1) remain.

    Attributes:
        labels (tuple): Error pattern of each component.
        weights (np.ndarray): Prior component weights, shape (K,).
        mean2 (np.ndarray): Mean of the x2 marginal, shape (K,).
        var2 (np.ndarray): Variance of the x2 marginal, shape (K,).
        base2 (np.ndarray): Mean of the kept coordinates at x2 = mean2, shape (K, 4).
        gain2 (np.ndarray): Shift of that mean per unit of x2, shape (K, 4).
        var3 (np.ndarray): Variance of x3 given x2, shape (K,).
        gain3 (np.ndarray): Shift of the signal mean per unit of x3, shape (K, 2).
        cov1 (np.ndarray): Signal covariance given both outcomes, shape (K, 2, 2).
    """

    labels: tuple
    weights: np.ndarray
    mean2: np.ndarray
    var2: np.ndarray
    base2: np.ndarray
    gain2: np.ndarray
    var3: np.ndarray
    gain3: np.ndarray
    cov1: np.ndarray

    @classmethod
    def from_mixture(cls, decoded: GaussianMixture) -> "ConditioningPlan":
        if decoded.n != 3:
            raise DimensionMismatchError(f"Syndrome conditioning needs three modes, got {decoded.n}")
        first = [homodyne_update(c.state, 1) for c in decoded.components]
        # in the (x1, p1, x3, p3) state ancilla 3 is mode 1
        second = [homodyne_update(GaussianState(u.base, u.cov), 1) for u in first]
        return cls(
            labels=tuple(c.label for c in decoded.components),
            weights=np.array(decoded.weights, dtype=float),
            mean2=np.array([u.marginal.mean for u in first]),
            var2=np.array([u.marginal.var for u in first]),
            base2=np.array([u.base for u in first]),
            gain2=np.array([u.gain for u in first]),
            var3=np.array([u.marginal.var for u in second]),
            gain3=np.array([u.gain for u in second]),
            cov1=np.array([u.cov for u in second]),
        )

    def after_x2(self, x2: float) -> np.ndarray:
        """Means of (x1, p1, x3, p3) given x2, shape (K, 4)."""
        return self.base2 + self.gain2 * (x2 - self.mean2)[:, None]

    def signal_means(self, after: np.ndarray, x3: float) -> np.ndarray:
        """Means of (x1, p1) given both outcomes, shape (K, 2)."""
        return after[:, :2] + self.gain3 * (x3 - after[:, 2])[:, None]


def _draw(weights: np.ndarray, means: np.ndarray, variances: np.ndarray, rng: np.random.Generator) -> float:
    # same draw order as mixtures.sample_homodyne: component first, then the outcome
    cumulative = np.cumsum(weights)
    index = int(min(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"), len(weights) - 1))
    return float(rng.normal(means[index], math.sqrt(variances[index])))


class RepetitionCodeProtocol:
    """
    The three-mode repetition code for a fixed signal and fixed code parameters.

    The channel output after decoding does not depend on the syndrome outcomes, so it
    is built once together with its `ConditioningPlan`. Every round then only draws
    the two outcomes, reweights the components and shifts their means.

    Attributes:
        signal (GaussianState): Pure single-mode input, also the fidelity target.
        params (CodeParams): Squeezing, displacement and error probability.
        policy (Policy): Classification policy.
        prune_epsilon (float | None): If set, components lighter than this are dropped
            after each measurement.
        decoded (GaussianMixture): Three-mode mixture after encoding, the channels and decoding.
        plan (ConditioningPlan): Precomputed conditioning of `decoded` on x2 then x3.

    Example:
        >>> from phase_space import coherent
        >>> protocol = RepetitionCodeProtocol(coherent(0, 0), CodeParams(r=1, xbar2=5, gamma=0.1))
        >>> run = protocol.run(np.random.default_rng(7))
        >>> 0.0 <= run.fid <= 1.0
        True
    """

    def __init__(
        self,
        signal: GaussianState,
        params: CodeParams,
        policy: Policy = Policy.THRESHOLD,
        prune_epsilon: float | None = None,
    ):
        if signal.n != 1:
            raise DimensionMismatchError(f"Signal must be single-mode, got {signal.n} modes")
        if not is_pure(signal):
            raise DomainError("Signal must be a pure state to serve as the fidelity target")
        if prune_epsilon is not None and prune_epsilon >= 1.0:
            raise DomainError(f"Prune threshold must be below 1, got {prune_epsilon}")
        self.signal = signal
        self.params = params
        self.policy = Policy(policy)
        self.prune_epsilon = prune_epsilon

        encoded = encode(pure(signal), params.r)
        channel = x_displacement_channel(params.gamma, params.xbar2)
        transmitted = apply_independent(encoded, [channel] * 3)
        self.decoded = decode(transmitted)
        self.plan = ConditioningPlan.from_mixture(self.decoded)
        self._prepare_overlaps()
        logger.debug(f"Prepared decoded mixture with {len(self.decoded)} branches for {params!r}")

    def _prepare_overlaps(self):
        total = self.plan.cov1 + self.signal.cov
        sign, logdet = np.linalg.slogdet(total)
        if np.any(sign <= 0):
            raise NumericalFailureError("Covariance sum with the target is not positive definite")
        self._overlap_inv = np.linalg.inv(total)
        # log(pi) - log(2 pi) - logdet / 2 for one mode
        self._overlap_log_norm = -math.log(2.0) - 0.5 * logdet

    def _maybe_prune(self, m: GaussianMixture) -> GaussianMixture:
        return m if self.prune_epsilon is None else prune(m, self.prune_epsilon)

    def _prune_weights(self, weights: np.ndarray) -> np.ndarray:
        if self.prune_epsilon is None:
            return weights
        kept = weights >= self.prune_epsilon
        if not kept.any():
            kept = np.arange(len(weights)) == np.argmax(weights)
        if kept.all():
            return weights
        weights = np.where(kept, weights, 0.0)
        return weights / weights.sum()

    def _reweight(
        self, weights: np.ndarray, x: float, means: np.ndarray, variances: np.ndarray, mode: int
    ) -> np.ndarray:
        with np.errstate(divide="ignore"):
            log_weights = np.log(weights)
        log_weights = log_weights - 0.5 * (x - means) ** 2 / variances - 0.5 * np.log(2.0 * np.pi * variances)
        log_total = logsumexp(log_weights)
        if not np.isfinite(log_total):
            raise ConditioningError(f"Outcome x={x!r} on ancilla {mode} has zero total density")
        posterior = np.exp(log_weights - log_total)
        return self._prune_weights(posterior / posterior.sum())

    def _condition(self, x2: float, x3: float) -> tuple[np.ndarray, np.ndarray]:
        weights = self._reweight(self.plan.weights, x2, self.plan.mean2, self.plan.var2, 2)
        after = self.plan.after_x2(x2)
        weights = self._reweight(weights, x3, after[:, 2], self.plan.var3, 3)
        return weights, self.plan.signal_means(after, x3)

    def _sample(self, rng: np.random.Generator) -> tuple[float, float, np.ndarray, np.ndarray]:
        plan = self.plan
        x2 = _draw(plan.weights, plan.mean2, plan.var2, rng)
        after = plan.after_x2(x2)
        weights = self._reweight(plan.weights, x2, plan.mean2, plan.var2, 2)
        x3 = _draw(weights, after[:, 2], plan.var3, rng)
        weights = self._reweight(weights, x3, after[:, 2], plan.var3, 3)
        return x2, x3, weights, plan.signal_means(after, x3)

    def _signal_mixture(self, weights: np.ndarray, means: np.ndarray) -> GaussianMixture:
        return GaussianMixture(
            tuple(
                WeightedComponent(float(w), GaussianState(mean, cov), label)
                for w, mean, cov, label in zip(weights, means, self.plan.cov1, self.plan.labels)
                if self.prune_epsilon is None or w > 0
            )
        )

    def run(self, rng: np.random.Generator) -> ProtocolRun:
        """
        One error-correction round: measure ancilla 2, then ancilla 3, classify, recover.

        Args:
            rng (np.random.Generator): Stream owned by this run.

        Returns:
            ProtocolRun: Outcomes, class, recovered signal state and its fidelity.
        """
        x2, x3, weights, means = self._sample(rng)
        return self._finish(x2, x3, self._signal_mixture(weights, means))

    def run_fidelity(self, rng: np.random.Generator) -> float:
        """
        Fidelity of one round, without building the recovered state.

        Consumes `rng` exactly like `run`, so both return the same fidelity for the
        same stream.
        """
        x2, x3, weights, means = self._sample(rng)
        cls = classify(x2, x3, self.params, self.policy)
        delta = means - self.signal.mean
        delta[:, 0] += feedforward_displacement(cls, x2, x3)
        quad = np.einsum("ki,kij,kj->k", delta, self._overlap_inv, delta)
        overlaps = np.minimum(1.0, np.exp(self._overlap_log_norm - 0.5 * quad))
        live = weights > 0
        return float(min(1.0, max(0.0, np.dot(weights[live], overlaps[live]))))

    def run_branch(self, pattern: tuple[int, ...], rng: np.random.Generator) -> ProtocolRun:
        """
        One round in which the channels are known to have produced `pattern`.

        The syndrome outcomes are drawn from that branch alone, while the signal is
        conditioned on them with the full mixture, as the receiver would do.

        Raises:
            KeyError: If no component of the decoded mixture carries `pattern`.
        """
        if tuple(pattern) not in self.plan.labels:
            raise KeyError(f"No branch with error pattern {pattern}")
        plan = self.plan
        branch = np.zeros(len(plan.labels))
        branch[plan.labels.index(tuple(pattern))] = 1.0
        x2 = _draw(branch, plan.mean2, plan.var2, rng)
        x3 = _draw(branch, plan.after_x2(x2)[:, 2], plan.var3, rng)
        return self.correct(x2, x3)

    def conditioned_signal(self, x2: float, x3: float, mode3_first: bool = False) -> GaussianMixture:
        """The signal-mode mixture conditioned on both ancilla outcomes, before feedforward."""
        if mode3_first:
            return self._maybe_prune(condition(self._maybe_prune(condition(self.decoded, 2, x3)), 1, x2))
        return self._signal_mixture(*self._condition(x2, x3))

    def correct(self, x2: float, x3: float) -> ProtocolRun:
        """Classify and recover for given syndrome outcomes."""
        return self._finish(x2, x3, self.conditioned_signal(x2, x3))

    def _finish(self, x2: float, x3: float, m: GaussianMixture) -> ProtocolRun:
        cls = classify(x2, x3, self.params, self.policy)
        output = recover(m, cls, x2, x3)
        return ProtocolRun(x2=x2, x3=x3, cls=cls, output=output, fid=fidelity_to_pure(output, self.signal))


def run_protocol(
    signal: GaussianState, params: CodeParams, policy: Policy, rng: np.random.Generator
) -> ProtocolRun:
    """One-shot wrapper around `RepetitionCodeProtocol.run`."""
    return RepetitionCodeProtocol(signal, params, policy).run(rng)


def ideal_output(signal: GaussianState, gamma: float, xbar2: float) -> GaussianMixture:
    """
    Outcome-averaged signal state in the infinite-squeezing limit.

    Every pattern except the triple error is corrected exactly; the triple error leaves
    an uncorrected x-shift of sqrt(3) * xbar2.

    Raises:
        DimensionMismatchError: If the signal is not single-mode.
    """
    if signal.n != 1:
        raise DimensionMismatchError(f"Signal must be single-mode, got {signal.n} modes")
    failure = gamma**3
    if failure == 0.0:
        return pure(signal)
    return mix([(1.0 - failure, pure(signal)), (failure, pure(displace(signal, 0, math.sqrt(3.0) * xbar2, 0.0)))])
