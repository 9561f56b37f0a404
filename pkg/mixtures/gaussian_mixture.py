from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from loguru import logger
from scipy.special import logsumexp

from phase_space import (
    GaussianState,
    SymplecticTransform,
    apply_symplectic,
    condition_on_x,
    displace,
    is_pure,
    marginal_x,
    overlap_pure,
)
from utils.errors import ConditioningError, DimensionMismatchError, DomainError, ProbabilitySumError

WEIGHT_SUM_TOL = 1e-10
DEFAULT_PRUNE_EPSILON = 1e-12


@dataclass(frozen=True)
class Displacement:
    """Phase-space displacement of one mode, usable with `map_components`."""

    mode: int
    dx: float
    dp: float = 0.0

    def __call__(self, state: GaussianState) -> GaussianState:
        return displace(state, self.mode, self.dx, self.dp)


@dataclass(frozen=True)
class WeightedComponent:
    """
    One Gaussian term of a mixture.

    Attributes:
        w (float): Probability weight in [0, 1].
        state (GaussianState): The Gaussian component.
        label (tuple[int, ...]): Sorted indices of the channels that displaced this
            component; empty for the error-free branch.
    """

    w: float
    state: GaussianState
    label: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.w <= 1.0 + WEIGHT_SUM_TOL:
            raise DomainError(f"Component weight must lie in [0, 1], got {self.w}")


@dataclass(frozen=True)
class GaussianMixture:
    """
    Finite convex mixture of Gaussian states with a common mode count.

    Mixtures are flat: branch provenance survives only as the per-component label.

    Attributes:
        components (tuple[WeightedComponent, ...]): Nonempty components whose
            weights sum to one within 1e-10.

    Example:
        >>> from phase_space import coherent
        >>> m = pure(coherent(1.0, 2.0))
        >>> m.n, len(m)
        (1, 1)
    """

    components: tuple[WeightedComponent, ...]

    def __post_init__(self):
        components = tuple(self.components)
        if not components:
            raise DomainError("A mixture needs at least one component")
        modes = {c.state.n for c in components}
        if len(modes) != 1:
            raise DimensionMismatchError(f"Mixture components have different mode counts: {sorted(modes)}")
        total = sum(c.w for c in components)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ProbabilitySumError(f"Mixture weights sum to {total!r}, not 1")
        object.__setattr__(self, "components", components)

    @property
    def n(self) -> int:
        return self.components[0].state.n

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.w for c in self.components])

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


def pure(s: GaussianState) -> GaussianMixture:
    return GaussianMixture((WeightedComponent(1.0, s),))


def mix(branches: Iterable[tuple[float, GaussianMixture]]) -> GaussianMixture:
    """
    Convex combination of mixtures, flattened into one component list.

    Args:
        branches (Iterable[tuple[float, GaussianMixture]]): Pairs (probability, mixture);
            probabilities must sum to one within 1e-10.

    Returns:
        GaussianMixture: Components of every branch with weights p * w.

    Raises:
        ProbabilitySumError: If the probabilities do not sum to one.
        DimensionMismatchError: If the branches have different mode counts.

    Example:
        >>> from phase_space import coherent, displace
        >>> s = coherent(0.0, 0.0)
        >>> out = mix([(0.9, pure(s)), (0.1, pure(displace(s, 0, 2.0, 0.0)))])
        >>> len(out)
        2
    """
    branches = list(branches)
    total = sum(p for p, _ in branches)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ProbabilitySumError(f"Branch probabilities sum to {total!r}, not 1")
    modes = {m.n for _, m in branches}
    if len(modes) > 1:
        raise DimensionMismatchError(f"Cannot mix branches with mode counts {sorted(modes)}")
    return GaussianMixture(
        tuple(WeightedComponent(p * c.w, c.state, c.label) for p, m in branches for c in m.components)
    )


def map_components(
    m: GaussianMixture, f: SymplecticTransform | Displacement | Callable[[GaussianState], GaussianState]
) -> GaussianMixture:
    """Apply a transform, a displacement or any state map to every component; weights are kept."""
    if isinstance(f, SymplecticTransform):
        if f.n != m.n:
            raise DimensionMismatchError(f"Cannot apply a {f.n}-mode transform to a {m.n}-mode mixture")
        return GaussianMixture(
            tuple(WeightedComponent(c.w, apply_symplectic(c.state, f), c.label) for c in m.components)
        )
    return GaussianMixture(tuple(WeightedComponent(c.w, f(c.state), c.label) for c in m.components))


def homodyne_density(m: GaussianMixture, mode: int, x: float) -> float:
    """Density of an x-homodyne outcome on `mode`: sum_i w_i * marginal_i(x)."""
    return float(sum(c.w * marginal_x(c.state, mode).pdf(x) for c in m.components))


def condition(m: GaussianMixture, mode: int, x: float) -> GaussianMixture:
    """
    Bayesian update of a mixture on the x-homodyne outcome of one mode.

    Every component is conditioned with `condition_on_x` and reweighted by its
    outcome density; the update runs in log space so very narrow components do
    not underflow.

    Raises:
        IndexError: If `mode` is out of range.
        ConditioningError: If the outcome has zero density under every component.
    """
    if not 0 <= mode < m.n:
        raise IndexError(f"Mode {mode} out of range for a {m.n}-mode mixture")
    log_weights = np.array(
        [np.log(c.w) + marginal_x(c.state, mode).logpdf(x) if c.w > 0 else -np.inf for c in m.components]
    )
    log_total = logsumexp(log_weights)
    if not np.isfinite(log_total):
        raise ConditioningError(f"Outcome x={x!r} on mode {mode} has zero total density")
    posterior = np.exp(log_weights - log_total)
    posterior /= posterior.sum()
    return GaussianMixture(
        tuple(
            WeightedComponent(float(w), condition_on_x(c.state, mode, x)[1], c.label)
            for w, c in zip(posterior, m.components)
        )
    )


def sample_component(m: GaussianMixture, rng: np.random.Generator) -> int:
    """Index of a component drawn with probability equal to its weight."""
    cumulative = np.cumsum(m.weights)
    return int(min(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"), len(m) - 1))


def sample_homodyne(m: GaussianMixture, mode: int, rng: np.random.Generator) -> tuple[float, GaussianMixture]:
    """
    Draw an x-homodyne outcome from the exact mixture marginal and condition on it.

    A component is drawn by weight, then the outcome from its Gaussian marginal.

    Args:
        m (GaussianMixture): Mixture to measure.
        mode (int): Measured mode.
        rng (np.random.Generator): Random stream owned by the caller.

    Returns:
        tuple[float, GaussianMixture]: The outcome and the conditioned mixture.
    """
    if not 0 <= mode < m.n:
        raise IndexError(f"Mode {mode} out of range for a {m.n}-mode mixture")
    marginal = marginal_x(m.components[sample_component(m, rng)].state, mode)
    x = float(rng.normal(marginal.mean, marginal.std))
    return x, condition(m, mode, x)


def fidelity_to_pure(m: GaussianMixture, target: GaussianState) -> float:
    """
    Fidelity of a mixture with a pure Gaussian target, sum_i w_i * overlap(state_i, target).

    Raises:
        DimensionMismatchError: If the mode counts differ.
        DomainError: If the target is not pure.
    """
    if m.n != target.n:
        raise DimensionMismatchError(f"Cannot compare a {m.n}-mode mixture with a {target.n}-mode target")
    if not is_pure(target):
        raise DomainError("Fidelity target must be a pure state")
    fidelity = sum(c.w * overlap_pure(c.state, target) for c in m.components if c.w > 0)
    return float(min(1.0, max(0.0, fidelity)))


def prune(m: GaussianMixture, epsilon: float = DEFAULT_PRUNE_EPSILON) -> GaussianMixture:
    """
    Drop components lighter than `epsilon` and renormalize; the heaviest one always survives.

    Raises:
        DomainError: If epsilon >= 1.
    """
    if epsilon >= 1.0:
        raise DomainError(f"Prune threshold must be below 1, got {epsilon}")
    kept = [c for c in m.components if c.w >= epsilon]
    if not kept:
        kept = [max(m.components, key=lambda c: c.w)]
    if len(kept) == len(m):
        return m
    total = sum(c.w for c in kept)
    logger.debug(f"Pruned {len(m) - len(kept)} components carrying weight {1.0 - total:.3e}")
    return GaussianMixture(tuple(WeightedComponent(c.w / total, c.state, c.label) for c in kept))


def mean_x(m: GaussianMixture, mode: int) -> float:
    return float(sum(c.w * marginal_x(c.state, mode).mean for c in m.components))


def variance_x(m: GaussianMixture, mode: int) -> float:
    """x-variance of one mode of the mixture (law of total variance)."""
    center = mean_x(m, mode)
    return float(
        sum(c.w * (marginal_x(c.state, mode).var + (marginal_x(c.state, mode).mean - center) ** 2) for c in m)
    )
