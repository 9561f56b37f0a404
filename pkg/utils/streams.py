import numpy as np


def point_sequence(seed: int, point_index: int = 0) -> np.random.SeedSequence:
    """
    Seed sequence of one experiment point, derived from the root seed and the point index.

    Different points of a sweep get statistically independent streams, and a point's
    stream does not depend on how many other points are evaluated or in which order.

    Args:
        seed (int): Non-negative root seed.
        point_index (int): Position of the point in its sweep.

    Returns:
        np.random.SeedSequence: The point's seed sequence.
    """
    return np.random.SeedSequence(entropy=seed, spawn_key=(point_index,))


def run_streams(seed: int, n_runs: int, point_index: int = 0) -> list[np.random.Generator]:
    """
    One independent PCG64 generator per Monte Carlo run of a point.

    Example:
        >>> a = run_streams(7, 3)[2].random()
        >>> b = run_streams(7, 5)[2].random()
        >>> a == b
        True
    """
    return [np.random.Generator(np.random.PCG64(child)) for child in point_sequence(seed, point_index).spawn(n_runs)]
