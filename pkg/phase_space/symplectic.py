from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from phase_space.gaussian_state import SYMMETRY_TOL, GaussianState, symplectic_form
from utils.errors import DimensionMismatchError, DomainError


@dataclass(frozen=True)
class SymplecticTransform:
    """
    Linear phase-space map acting on (x1, p1, ..., xn, pn).

    Attributes:
        S (np.ndarray): Real 2n x 2n symplectic matrix.

    Example:
        >>> bs = beam_splitter(2, 0, 1, 0.5)
        >>> bs.is_passive()
        True
    """

    S: np.ndarray

    def __post_init__(self):
        S = np.array(self.S, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
            raise DimensionMismatchError(f"Symplectic matrix must be square of even size, got {S.shape}")
        omega = symplectic_form(S.shape[0] // 2)
        if np.max(np.abs(S @ omega @ S.T - omega)) > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(S))) ** 2):
            raise DomainError("Matrix does not preserve the symplectic form")
        S.flags.writeable = False
        object.__setattr__(self, "S", S)

    @property
    def n(self) -> int:
        return self.S.shape[0] // 2

    def is_passive(self) -> bool:
        return bool(np.max(np.abs(self.S.T @ self.S - np.eye(2 * self.n))) <= SYMMETRY_TOL)

    def compose(self, first: "SymplecticTransform") -> "SymplecticTransform":
        """The transform that applies `first` and then `self`."""
        if first.n != self.n:
            raise DimensionMismatchError(f"Cannot compose {self.n}-mode and {first.n}-mode transforms")
        return SymplecticTransform(self.S @ first.S)

    def transpose(self) -> "SymplecticTransform":
        return SymplecticTransform(self.S.T)

    def inverse(self) -> "SymplecticTransform":
        omega = symplectic_form(self.n)
        return SymplecticTransform(-omega @ self.S.T @ omega)


def identity(n: int) -> SymplecticTransform:
    return SymplecticTransform(np.eye(2 * n))


def _lift(n: int, modes: tuple[int, ...], block: np.ndarray) -> SymplecticTransform:
    # the same mode-space matrix acts on the x block and on the p block
    for mode in modes:
        if not 0 <= mode < n:
            raise IndexError(f"Mode {mode} out of range for {n} modes")
    mode_matrix = np.eye(n)
    mode_matrix[np.ix_(modes, modes)] = block
    return SymplecticTransform(np.kron(mode_matrix, np.eye(2)))


def beam_splitter(n: int, i: int, j: int, t: float) -> SymplecticTransform:
    """
    Beam splitter of transmittance `t` between modes `i` and `j` of an n-mode system.

    Acts on both the x and the p block as the rotation
    [[sqrt(t), sqrt(1 - t)], [-sqrt(1 - t), sqrt(t)]] on (i, j).

    Args:
        n (int): Number of modes.
        i (int): First mode.
        j (int): Second mode, different from `i`.
        t (float): Transmittance in the open interval (0, 1).

    Raises:
        DomainError: If `t` lies outside (0, 1) or `i == j`.
        IndexError: If a mode index is out of range.

    Example:
        >>> beam_splitter(2, 0, 1, 0.5).S.shape
        (4, 4)
    """
    if not 0.0 < t < 1.0:
        raise DomainError(f"Beam splitter transmittance must lie in (0, 1), got {t}")
    if i == j:
        raise DomainError(f"Beam splitter needs two distinct modes, got {i} twice")
    c, s = np.sqrt(t), np.sqrt(1.0 - t)
    return _lift(n, (i, j), np.array([[c, s], [-s, c]]))


def phase_shift(n: int, mode: int, theta: float) -> SymplecticTransform:
    """Rotation of one mode's phase space by `theta`; theta = pi flips both quadratures."""
    if not 0 <= mode < n:
        raise IndexError(f"Mode {mode} out of range for {n} modes")
    c, s = np.cos(theta), np.sin(theta)
    S = np.eye(2 * n)
    S[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2] = [[c, s], [-s, c]]
    return SymplecticTransform(S)


def sign_flip(n: int, mode: int) -> SymplecticTransform:
    """Exact pi phase shift of one mode: both quadratures change sign."""
    return _lift(n, (mode,), -np.eye(1))


@lru_cache(maxsize=None)
def tritter() -> SymplecticTransform:
    """
    Three-mode passive encoder sending mode 1 into the symmetric combination of all modes.

    Built from a 1:2 beam splitter on modes (1, 2), a 1:1 beam splitter on modes (3, 2)
    and exact pi phase shifts on modes 2 and 3, so x and p never mix. Its mode-space
    matrix is

        [[1/sqrt(3),  sqrt(2/3),  0        ],
         [1/sqrt(3), -1/sqrt(6),  1/sqrt(2)],
         [1/sqrt(3), -1/sqrt(6), -1/sqrt(2)]]

    so row j is the decoded shift pattern of an x error in channel j.
    """
    network = identity(3)
    for stage in (
        beam_splitter(3, 0, 1, 1.0 / 3.0),
        beam_splitter(3, 2, 1, 0.5),
        sign_flip(3, 1),
        sign_flip(3, 2),
    ):
        network = stage.compose(network)
    return network


def tritter_matrix() -> np.ndarray:
    """The 3 x 3 mode-space matrix of the tritter (its action on the x block)."""
    return tritter().S[0::2, 0::2].copy()


def apply_symplectic(s: GaussianState, transform: SymplecticTransform) -> GaussianState:
    """Gaussian update mean -> S mean, cov -> S cov S^T."""
    if s.n != transform.n:
        raise DimensionMismatchError(f"Cannot apply a {transform.n}-mode transform to a {s.n}-mode state")
    S = transform.S
    cov = S @ s.cov @ S.T
    return GaussianState(S @ s.mean, 0.5 * (cov + cov.T))
