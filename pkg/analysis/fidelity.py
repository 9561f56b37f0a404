import math

from phase_space import GaussianState, overlap_pure, vacuum


def fidelity_direct(gamma: float, xbar2: float) -> float:
    """
    Fidelity of an unencoded coherent state sent through one x-displacement channel.

    (1 - gamma) + gamma * e^{-xbar2^2}; tends to 1 - gamma for large displacements.
    """
    return (1.0 - gamma) + gamma * math.exp(-(xbar2**2))


def fidelity_encoded_ideal(gamma: float, xbar2: float) -> float:
    """Encoded fidelity with infinite squeezing: (1 - gamma^3) + gamma^3 e^{-3 xbar2^2}."""
    return (1.0 - gamma**3) + gamma**3 * math.exp(-3.0 * xbar2**2)


def fidelity_encoded_semianalytic(gamma: float, r: float, xbar2: float) -> float:
    """
    Encoded fidelity at finite squeezing assuming every branch is classified correctly.

    A corrected branch leaves a Gaussian-distributed residual x-shift of variance
    g^2 e^{-2r}/4, which lowers its fidelity to (1 + g^2 e^{-2r}/2)^{-1/2}.

    Args:
        gamma (float): Per-channel error probability.
        r (float): Ancilla squeezing.
        xbar2 (float): Channel displacement.

    Returns:
        float: The averaged fidelity.

    Example:
        >>> round(fidelity_encoded_semianalytic(0.1, 20.0, 5.0), 6)
        0.999
    """
    noise = math.exp(-2.0 * r)
    single = 1.0 / math.sqrt(1.0 + noise / 4.0) + 2.0 / math.sqrt(1.0 + noise / 3.0)
    double = 2.0 / math.sqrt(1.0 + 4.0 * noise / 3.0) + 1.0 / math.sqrt(1.0 + noise)
    return (
        (1.0 - gamma) ** 3
        + gamma * (1.0 - gamma) ** 2 * single
        + gamma**2 * (1.0 - gamma) * double
        + gamma**3 * math.exp(-3.0 * xbar2**2)
    )


def fidelity_qubit_repetition(gamma: float) -> float:
    """Success probability of the three-qubit bit-flip code under majority vote, 1 - 3g^2 + 2g^3."""
    return 1.0 - 3.0 * gamma**2 + 2.0 * gamma**3


def fidelity_erasure_direct(gamma: float, signal: GaussianState) -> float:
    """Fidelity of the signal after a channel that replaces it by the vacuum with probability gamma."""
    return (1.0 - gamma) + gamma * overlap_pure(signal, vacuum(signal.n))
