from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from utils.errors import DimensionMismatchError, DomainError, NumericalFailureError, UnphysicalStateError

VACUUM_VARIANCE = 0.25
SYMMETRY_TOL = 1e-12
UNCERTAINTY_TOL = 1e-10
PURITY_TOL = 1e-9


def symplectic_form(n: int) -> np.ndarray:
    """Block-diagonal symplectic form with per-mode blocks [[0, 1], [-1, 0]]."""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ScalarGaussian:
    """
    One-dimensional Gaussian, the homodyne marginal of a single x-quadrature.

    Attributes:
        mean (float): Mean of the marginal.
        var (float): Variance of the marginal, strictly positive.
    """

    mean: float
    var: float

    def __post_init__(self):
        if not self.var > 0:
            raise UnphysicalStateError(f"Marginal variance must be positive, got {self.var}")

    @property
    def std(self) -> float:
        return float(np.sqrt(self.var))

    def logpdf(self, x: float) -> float:
        return float(-0.5 * (x - self.mean) ** 2 / self.var - 0.5 * np.log(2.0 * np.pi * self.var))

    def pdf(self, x: float) -> float:
        return float(np.exp(self.logpdf(x)))

    def interval_mass(self, lo: float, hi: float) -> float:
        """Probability mass on [lo, hi]; infinite endpoints are allowed."""
        if hi <= lo:
            return 0.0
        return float(ndtr((hi - self.mean) / self.std) - ndtr((lo - self.mean) / self.std))


@dataclass(frozen=True)
class GaussianState:
    """
    A multimode Gaussian state given by its mean vector and covariance matrix.

    Quadratures are ordered (x1, p1, ..., xn, pn) and expressed in units where the
    vacuum variance of each quadrature is 1/4. The arrays are stored read-only so a
    state can be shared freely. A state with zero modes is allowed and is what
    remains after the last mode has been measured.

    Attributes:
        mean (np.ndarray): Mean vector of length 2n.
        cov (np.ndarray): Real symmetric 2n x 2n covariance matrix.

    Example:
        >>> state = coherent(1.0, 0.5)
        >>> state.n
        1
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _frozen(np.ravel(self.mean))
        cov = _frozen(self.cov)
        if mean.shape[0] % 2:
            raise DimensionMismatchError(f"Mean vector length must be even, got {mean.shape[0]}")
        if cov.shape != (mean.shape[0], mean.shape[0]):
            raise DimensionMismatchError(
                f"Covariance shape {cov.shape} does not match mean vector length {mean.shape[0]}"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n(self) -> int:
        return self.mean.shape[0] // 2

    def validate(self) -> "GaussianState":
        """
        Check symmetry and the uncertainty relation of the covariance matrix.

        Returns:
            GaussianState: The state itself, so constructors can chain the call.

        Raises:
            UnphysicalStateError: If the covariance is not symmetric or violates
                the uncertainty relation.
        """
        if not is_physical(self.cov):
            raise UnphysicalStateError(f"Covariance matrix of a {self.n}-mode state is not physical")
        return self

    def _check_mode(self, mode: int):
        if not 0 <= mode < self.n:
            raise IndexError(f"Mode {mode} out of range for a {self.n}-mode state")


def is_physical(cov: np.ndarray) -> bool:
    """
    Whether a covariance matrix is symmetric and satisfies the uncertainty relation.

    The uncertainty relation in vacuum-variance-1/4 units reads cov + (i/4) * Omega >= 0;
    eigenvalues down to -1e-10 are accepted.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.size == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(cov))))
    if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
        return False
    n = cov.shape[0] // 2
    eigenvalues = np.linalg.eigvalsh(cov + 0.25j * symplectic_form(n))
    return bool(eigenvalues.min() >= -UNCERTAINTY_TOL)


def vacuum(n: int = 1) -> GaussianState:
    return GaussianState(np.zeros(2 * n), VACUUM_VARIANCE * np.eye(2 * n))


def coherent(x: float, p: float) -> GaussianState:
    """
    Single-mode coherent state with mean (x, p) and covariance I/4.

    Example:
        >>> coherent(3.0, -2.0).mean
        array([ 3., -2.])
    """
    return GaussianState(np.array([x, p]), VACUUM_VARIANCE * np.eye(2)).validate()


def squeezed_vacuum(r: float) -> GaussianState:
    """
    Single-mode x-squeezed vacuum: covariance diag(e^{-2r}/4, e^{2r}/4).

    Args:
        r (float): Squeezing parameter; r = 0 is the vacuum.

    Raises:
        DomainError: If r is not finite.
    """
    if not np.isfinite(r):
        raise DomainError(f"Squeezing parameter must be finite, got {r}")
    cov = np.diag([np.exp(-2.0 * r), np.exp(2.0 * r)]) * VACUUM_VARIANCE
    return GaussianState(np.zeros(2), cov).validate()


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    """Product state with the modes of `a` first; covariance is block diagonal."""
    dim_a, dim_b = 2 * a.n, 2 * b.n
    cov = np.zeros((dim_a + dim_b, dim_a + dim_b))
    cov[:dim_a, :dim_a] = a.cov
    cov[dim_a:, dim_a:] = b.cov
    return GaussianState(np.concatenate([a.mean, b.mean]), cov)


def displace(s: GaussianState, mode: int, dx: float, dp: float) -> GaussianState:
    """Shift the mean of one mode by (dx, dp); the covariance is untouched."""
    s._check_mode(mode)
    mean = np.array(s.mean)
    mean[2 * mode] += dx
    mean[2 * mode + 1] += dp
    return GaussianState(mean, s.cov)


def marginal_x(s: GaussianState, mode: int) -> ScalarGaussian:
    s._check_mode(mode)
    return ScalarGaussian(float(s.mean[2 * mode]), float(s.cov[2 * mode, 2 * mode]))


@dataclass(frozen=True)
class HomodyneUpdate:
    """
    Outcome-independent part of conditioning a state on the x-outcome of one mode.

    The conditional covariance does not depend on the outcome and the conditional
    mean is affine in it, so both can be computed once and reused for every outcome.

    Attributes:
        marginal (ScalarGaussian): Distribution of the outcome.
        keep (tuple[int, ...]): Coordinates of the state that remain after the measurement.
        base (np.ndarray): Conditional mean when the outcome equals the marginal mean.
        gain (np.ndarray): Shift of the conditional mean per unit of outcome offset.
        cov (np.ndarray): Conditional covariance of the kept coordinates.
    """

    marginal: ScalarGaussian
    keep: tuple[int, ...]
    base: np.ndarray
    gain: np.ndarray
    cov: np.ndarray

    def mean_given(self, m: float) -> np.ndarray:
        return self.base + self.gain * (m - self.marginal.mean)

    def state_given(self, m: float) -> GaussianState:
        return GaussianState(self.mean_given(m), self.cov)


def homodyne_update(s: GaussianState, mode: int) -> HomodyneUpdate:
    """
    Schur-complement update for an x-homodyne measurement of `mode`.

    The p-quadrature of the measured mode is traced out.

    Raises:
        IndexError: If `mode` is out of range.
    """
    marginal = marginal_x(s, mode)
    a = 2 * mode
    keep = tuple(i for i in range(2 * s.n) if i not in (a, a + 1))
    gain = s.cov[list(keep), a] / marginal.var
    cov = s.cov[np.ix_(keep, keep)] - np.outer(gain, s.cov[a, list(keep)])
    return HomodyneUpdate(marginal, keep, _frozen(s.mean[list(keep)]), _frozen(gain), _frozen(0.5 * (cov + cov.T)))


def condition_on_x(s: GaussianState, mode: int, m: float) -> tuple[float, GaussianState]:
    """
    Condition a Gaussian state on the x-homodyne outcome `m` of one mode.

    Args:
        s (GaussianState): State to condition.
        mode (int): Index of the measured mode.
        m (float): Measured x value.

    Returns:
        tuple[float, GaussianState]: The marginal density of the outcome and the
            conditional state of the other n - 1 modes (zero modes when n = 1).

    Raises:
        IndexError: If `mode` is out of range.
    """
    update = homodyne_update(s, mode)
    return update.marginal.pdf(m), update.state_given(m)


def purity(s: GaussianState) -> float:
    """Purity 1 / (4^n sqrt(det cov)); equal to one for pure states."""
    if s.n == 0:
        return 1.0
    return float(1.0 / (4.0**s.n * np.sqrt(np.linalg.det(s.cov))))


def is_pure(s: GaussianState) -> bool:
    return abs(purity(s) - 1.0) < PURITY_TOL


def block_is_uncorrelated(s: GaussianState, mode: int, tol: float = SYMMETRY_TOL) -> bool:
    """Whether the covariance couples `mode` to no other mode."""
    s._check_mode(mode)
    rows = slice(2 * mode, 2 * mode + 2)
    others = [i for i in range(2 * s.n) if i not in (2 * mode, 2 * mode + 1)]
    return bool(np.all(np.abs(s.cov[rows, others]) <= tol))


def overlap_pure(a: GaussianState, b: GaussianState) -> float:
    """
    Overlap of two Gaussian states, a fidelity when at least one of them is pure.

    F = pi^n ((2 pi)^{2n} det(S))^{-1/2} exp(-d^T S^{-1} d / 2), where S is the sum
    of the covariances and d the difference of the means.

    Raises:
        DimensionMismatchError: If the mode counts differ.
        NumericalFailureError: If the covariance sum is singular.
    """
    if a.n != b.n:
        raise DimensionMismatchError(f"Cannot overlap a {a.n}-mode state with a {b.n}-mode state")
    if a.n == 0:
        return 1.0
    total = a.cov + b.cov
    delta = a.mean - b.mean
    try:
        sign, logdet = np.linalg.slogdet(total)
        if sign <= 0:
            raise np.linalg.LinAlgError("covariance sum is not positive definite")
        quad = float(delta @ np.linalg.solve(total, delta))
    except np.linalg.LinAlgError as e:
        raise NumericalFailureError(f"Gaussian overlap failed: {e}") from e
    n = a.n
    log_f = n * np.log(np.pi) - 0.5 * (2 * n * np.log(2.0 * np.pi) + logdet) - 0.5 * quad
    return float(min(1.0, np.exp(log_f)))
