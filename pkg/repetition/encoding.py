from loguru import logger

from mixtures import GaussianMixture, map_components
from phase_space import squeezed_vacuum, tensor, tritter
from utils.errors import DimensionMismatchError


def encode(signal: GaussianMixture, r: float) -> GaussianMixture:
    """
    Encode a single-mode signal into three modes.

    The signal is joined by two x-squeezed ancillas with squeezing `r` and the three
    modes are combined on the tritter.

    Args:
        signal (GaussianMixture): Single-mode input.
        r (float): Ancilla squeezing parameter.

    Returns:
        GaussianMixture: The encoded three-mode mixture.

    Raises:
        DimensionMismatchError: If the signal does not have exactly one mode.

    Example:
        >>> from mixtures import pure
        >>> from phase_space import coherent
        >>> encode(pure(coherent(1.0, 0.0)), 1.0).n
        3
    """
    if signal.n != 1:
        raise DimensionMismatchError(f"Only single-mode signals can be encoded, got {signal.n} modes")
    ancilla = squeezed_vacuum(r)
    product = map_components(signal, lambda s: tensor(tensor(s, ancilla), ancilla))
    logger.debug(f"Encoding {len(signal)}-component signal with ancilla squeezing r={r}")
    return map_components(product, tritter())


def decode(m: GaussianMixture) -> GaussianMixture:
    """Invert the tritter on a three-mode mixture."""
    if m.n != 3:
        raise DimensionMismatchError(f"Decoding needs a 3-mode mixture, got {m.n} modes")
    return map_components(m, tritter().transpose())
