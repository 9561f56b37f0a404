from itertools import combinations

import numpy as np
from loguru import logger

from mixtures import GaussianMixture, WeightedComponent, mix, pure
from models import BranchRecord, GeneralDisplacement, Replacement, StochasticChannel, XDisplacement
from phase_space import GaussianState, block_is_uncorrelated, displace, tritter_matrix, vacuum
from utils.errors import DimensionMismatchError, UnsupportedReplacementError

ERROR_PATTERNS: tuple[tuple[int, ...], ...] = tuple(
    pattern for size in range(4) for pattern in combinations(range(3), size)
)


def x_displacement_channel(gamma: float, xbar2: float) -> StochasticChannel:
    return StochasticChannel(gamma=gamma, branch=XDisplacement(shift=xbar2))


def erasure_channel(gamma: float) -> StochasticChannel:
    """Channel replacing the mode by the vacuum with probability gamma."""
    return StochasticChannel(gamma=gamma, branch=Replacement(state=pure(vacuum(1))))


def _replace_mode(state: GaussianState, mode: int, replacement: GaussianState) -> GaussianState:
    block = slice(2 * mode, 2 * mode + 2)
    mean = np.array(state.mean)
    cov = np.array(state.cov)
    mean[block] = replacement.mean
    cov[block, block] = replacement.cov
    return GaussianState(mean, cov)


def _error_branch(m: GaussianMixture, channel: StochasticChannel, mode: int) -> GaussianMixture:
    branch = channel.branch
    if isinstance(branch, (XDisplacement, GeneralDisplacement)):
        dx, dp = (branch.shift, 0.0) if isinstance(branch, XDisplacement) else (branch.dx, branch.dp)
        return GaussianMixture(
            tuple(
                WeightedComponent(c.w, displace(c.state, mode, dx, dp), tuple(sorted(c.label + (mode,))))
                for c in m.components
            )
        )
    components = []
    for c in m.components:
        if not block_is_uncorrelated(c.state, mode):
            raise UnsupportedReplacementError(
                f"Mode {mode} is correlated with other modes; replacing its marginal is not a mixture update"
            )
        for r in branch.state.components:
            components.append(
                WeightedComponent(c.w * r.w, _replace_mode(c.state, mode, r.state), tuple(sorted(c.label + (mode,))))
            )
    return GaussianMixture(tuple(components))


def apply_channel(m: GaussianMixture, channel: StochasticChannel, mode: int) -> GaussianMixture:
    """
    Send one mode of a mixture through a stochastic channel.

    The result is the mixture (1 - gamma) * m + gamma * (error applied to `mode`).
    Displacement branches shift component means; a replacement branch swaps the
    mode's marginal for the given state and requires the mode to be uncorrelated
    with the rest in every component.

    Args:
        m (GaussianMixture): Input mixture.
        channel (StochasticChannel): Channel acting on `mode`.
        mode (int): Index of the affected mode.

    Returns:
        GaussianMixture: The channel output. Error components carry `mode` in their label.

    Raises:
        IndexError: If `mode` is out of range.
        UnsupportedReplacementError: If a replacement targets a correlated mode.

    Example:
        >>> from phase_space import coherent
        >>> out = apply_channel(pure(coherent(0, 0)), x_displacement_channel(0.1, 2.0), 0)
        >>> [round(c.w, 2) for c in out]
        [0.9, 0.1]
    """
    if not 0 <= mode < m.n:
        raise IndexError(f"Mode {mode} out of range for a {m.n}-mode mixture")
    if channel.gamma == 0.0:
        return m
    errored = _error_branch(m, channel, mode)
    if channel.gamma == 1.0:
        return errored
    return mix([(1.0 - channel.gamma, m), (channel.gamma, errored)])


def apply_independent(m: GaussianMixture, channels: list[StochasticChannel]) -> GaussianMixture:
    """
    Apply one independent channel per mode, mode 0 first.

    Raises:
        DimensionMismatchError: If the number of channels differs from the mode count.
    """
    if len(channels) != m.n:
        raise DimensionMismatchError(f"Got {len(channels)} channels for a {m.n}-mode mixture")
    for mode, channel in enumerate(channels):
        m = apply_channel(m, channel, mode)
    logger.debug(f"Independent channels produced {len(m)} branches")
    return m


def branch_table(gamma: float, xbar2: float) -> list[BranchRecord]:
    """
    The eight error patterns of three identical x-displacement channels after decoding.

    The decoded shift of an error in channel j is row j of the tritter matrix scaled
    by `xbar2`; multiple errors add up.

    Args:
        gamma (float): Per-channel error probability.
        xbar2 (float): Channel displacement.

    Returns:
        list[BranchRecord]: Patterns ordered none, 1, 2, 3, 12, 13, 23, 123.

    Example:
        >>> [round(b.weight, 3) for b in branch_table(0.2, 1.0)]
        [0.512, 0.128, 0.128, 0.128, 0.032, 0.032, 0.032, 0.008]
    """
    T = tritter_matrix()
    records = []
    for pattern in ERROR_PATTERNS:
        shift = xbar2 * T[list(pattern)].sum(axis=0) if pattern else np.zeros(3)
        records.append(
            BranchRecord(
                pattern=tuple(i in pattern for i in range(3)),
                weight=gamma ** len(pattern) * (1.0 - gamma) ** (3 - len(pattern)),
                mode1_x_shift=float(shift[0]),
                ancilla_shifts=(float(shift[1]), float(shift[2])),
            )
        )
    return records
