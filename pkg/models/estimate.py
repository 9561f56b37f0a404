from pydantic import BaseModel, ConfigDict, Field


class McEstimate(BaseModel):
    """
    Monte Carlo sample mean with its standard error.

    Attributes:
        mean (float): Sample mean.
        stderr (float): Sample standard deviation over sqrt(n_runs); zero for one run.
        n_runs (int): Number of samples.
        seed (int): Root seed the samples were drawn from.

    Example:
        >>> est = McEstimate(mean=0.999, stderr=1e-4, n_runs=10000, seed=7)
        >>> est.contains(0.9992, n_sigma=3)
        True
    """

    model_config = ConfigDict(frozen=True)

    mean: float
    stderr: float = Field(..., ge=0.0)
    n_runs: int = Field(..., ge=1)
    seed: int

    def contains(self, value: float, n_sigma: float = 3.0) -> bool:
        """Whether `value` lies within `n_sigma` standard errors of the mean."""
        return abs(value - self.mean) <= n_sigma * self.stderr + 1e-12
