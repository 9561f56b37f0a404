import numpy as np
from loguru import logger

from channels import ERROR_PATTERNS, apply_channel
from mixtures import fidelity_to_pure, mean_x, pure
from models import CodeParams, McEstimate, Policy, StochasticChannel, SyndromeClass
from phase_space import GaussianState, coherent
from repetition import PATTERN_CLASSES, RepetitionCodeProtocol
from utils.errors import DomainError, NumericalFailureError
from utils.streams import run_streams


def _check_sampling(n_runs: int, seed: int, minimum: int = 1):
    if n_runs < minimum:
        raise DomainError(f"Need at least {minimum} runs, got {n_runs}")
    if seed < 0:
        raise DomainError(f"Seed must be non-negative, got {seed}")


def summarize(samples: np.ndarray, seed: int) -> McEstimate:
    """
    Sample mean and standard error of per-run values.

    The standard error is the sample standard deviation (ddof = 1) over sqrt(n),
    and zero for a single sample.

    Raises:
        NumericalFailureError: If any sample is not finite.
    """
    samples = np.asarray(samples, dtype=float)
    if not np.all(np.isfinite(samples)):
        raise NumericalFailureError(f"{int(np.sum(~np.isfinite(samples)))} Monte Carlo samples are not finite")
    n = samples.size
    stderr = float(samples.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return McEstimate(mean=float(samples.mean()), stderr=stderr, n_runs=n, seed=seed)


def estimate_fidelity_mc(
    params: CodeParams,
    policy: Policy = Policy.THRESHOLD,
    n_runs: int = 1000,
    seed: int = 0,
    signal: GaussianState | None = None,
    point_index: int = 0,
    prune_epsilon: float | None = None,
) -> McEstimate:
    """
    Monte Carlo estimate of the average repetition-code fidelity.

    Each run owns a child stream of the seed sequence spawned from (seed, point_index),
    so the estimate is reproducible and a run's outcome does not depend on `n_runs`.

    Args:
        params (CodeParams): Code parameters.
        policy (Policy): Classification policy.
        n_runs (int): Number of independent runs, at least one.
        seed (int): Non-negative root seed.
        signal (GaussianState | None): Pure single-mode input; the vacuum coherent state by default.
        point_index (int): Index of the experiment within a sweep.
        prune_epsilon (float | None): Optional mixture pruning threshold.

    Returns:
        McEstimate: Mean and standard error of the per-run fidelities.

    Raises:
        DomainError: If `n_runs` < 1 or the seed is negative.

    Example:
        >>> est = estimate_fidelity_mc(CodeParams(r=1.0, xbar2=5.0, gamma=0.0), n_runs=10, seed=3)
        >>> round(est.mean, 6), round(est.stderr, 6)
        (1.0, 0.0)
    """
    _check_sampling(n_runs, seed)
    signal = coherent(0.0, 0.0) if signal is None else signal
    protocol = RepetitionCodeProtocol(signal, params, policy, prune_epsilon)
    fidelities = np.array([protocol.run_fidelity(rng) for rng in run_streams(seed, n_runs, point_index)])
    estimate = summarize(fidelities, seed)
    logger.debug(f"Point {point_index}: fidelity {estimate.mean:.6f} +/- {estimate.stderr:.2e} over {n_runs} runs")
    return estimate


def estimate_direct_mc(signal: GaussianState, channel: StochasticChannel, n_runs: int, seed: int) -> McEstimate:
    """
    Monte Carlo estimate of the fidelity of an unencoded signal sent through one channel.

    A run suffers the channel's error branch with probability gamma and is otherwise
    delivered untouched.

    Raises:
        DomainError: If `n_runs` < 1 or the seed is negative.
    """
    _check_sampling(n_runs, seed)
    errored = apply_channel(pure(signal), StochasticChannel(gamma=1.0, branch=channel.branch), 0)
    error_fidelity = fidelity_to_pure(errored, signal)
    hits = np.array([rng.random() < channel.gamma for rng in run_streams(seed, n_runs)])
    return summarize(np.where(hits, error_fidelity, 1.0), seed)


def excess_noise_mc(
    params: CodeParams,
    policy: Policy,
    n_per_branch: int,
    seed: int,
    signal: GaussianState | None = None,
) -> dict[SyndromeClass, McEstimate]:
    """
    Output x-variance of the recovered signal for each correctable error pattern.

    For every pattern with nonzero probability except the triple error, `n_per_branch`
    rounds are run with the channels forced into that pattern. The estimate is the
    sample variance of the recovered x-mean plus the vacuum variance 1/4, to be
    compared with `residual_variance`. Its standard error uses the normal-theory
    formula var * sqrt(2 / (n - 1)).

    Args:
        params (CodeParams): Code parameters.
        policy (Policy): Classification policy.
        n_per_branch (int): Rounds per pattern, at least two.
        seed (int): Root seed; pattern k uses the streams spawned from (seed, k).
        signal (GaussianState | None): Pure single-mode input; the vacuum coherent state by default.

    Returns:
        dict[SyndromeClass, McEstimate]: Keyed by the class that corrects each pattern.

    Raises:
        DomainError: If `n_per_branch` < 2 or the seed is negative.
    """
    _check_sampling(n_per_branch, seed, minimum=2)
    signal = coherent(0.0, 0.0) if signal is None else signal
    protocol = RepetitionCodeProtocol(signal, params, policy)
    present = {c.label for c in protocol.decoded.components if c.w > 0.0}
    estimates = {}
    for index, pattern in enumerate(ERROR_PATTERNS):
        if len(pattern) == 3 or pattern not in present:
            continue
        means = np.array(
            [mean_x(protocol.run_branch(pattern, rng).output, 0) for rng in run_streams(seed, n_per_branch, index)]
        )
        variance = float(means.var(ddof=1))
        estimates[PATTERN_CLASSES[pattern]] = McEstimate(
            mean=0.25 + variance,
            stderr=variance * float(np.sqrt(2.0 / (n_per_branch - 1))),
            n_runs=n_per_branch,
            seed=seed,
        )
    return estimates
