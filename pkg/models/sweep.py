from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.code_params import CodeParams
from models.syndrome import Policy

SWEEP_COLUMNS = (
    "param_name",
    "param_value",
    "gamma",
    "r",
    "xbar2",
    "f_direct",
    "f_ideal",
    "f_semianalytic",
    "f_mc_mean",
    "f_mc_stderr",
    "n_runs",
    "seed",
)


class SweepSpec(BaseModel):
    """
    A one-parameter grid of Monte Carlo experiments.

    Attributes:
        param (str): Varied parameter, one of "gamma", "r" or "xbar2".
        values (list[float]): Nonempty grid of values for `param`.
        base (CodeParams): Parameters held fixed; `param` is overridden per point.
        signal_x (float): x-mean of the coherent input.
        signal_p (float): p-mean of the coherent input.
        runs (int): Monte Carlo runs per grid point.
        seed (int): Root seed; point i uses the stream spawned from (seed, i).
        policy (Policy): Classification policy.
        workers (int): Number of worker processes; 1 runs in-process.

    Example:
        >>> spec = SweepSpec(param="gamma", values=[0.1, 0.2], base=CodeParams(r=1, xbar2=5, gamma=0.1),
        ...                  runs=100, seed=1)
        >>> len(spec.points())
        2
    """

    model_config = ConfigDict(frozen=True)

    param: Literal["gamma", "r", "xbar2"]
    values: list[float] = Field(..., min_length=1)
    base: CodeParams
    signal_x: float = 0.0
    signal_p: float = 0.0
    runs: int = Field(..., ge=1)
    seed: int
    policy: Policy = Policy.THRESHOLD
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _grid_within_domain(self):
        # each point must itself be a valid CodeParams
        self.points()
        return self

    def points(self) -> list[CodeParams]:
        return [CodeParams.model_validate({**self.base.model_dump(), self.param: value}) for value in self.values]


class SweepRow(BaseModel):
    """One CSV row of a sweep; field order matches `SWEEP_COLUMNS`."""

    model_config = ConfigDict(frozen=True)

    param_name: str
    param_value: float
    gamma: float
    r: float
    xbar2: float
    f_direct: float
    f_ideal: float
    f_semianalytic: float
    f_mc_mean: float
    f_mc_stderr: float
    n_runs: int
    seed: int
