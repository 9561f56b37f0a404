import math

from pydantic import BaseModel, ConfigDict, Field


class CodeParams(BaseModel):
    """
    Parameters of one repetition-code experiment.

    Attributes:
        r (float): Squeezing parameter of the two ancillas.
        xbar2 (float): Magnitude of the channel x-displacement, strictly positive.
        gamma (float): Per-channel error probability in [0, 1].
        assumed_xbar2 (float | None): Displacement the classifier assumes. Defaults
            to `xbar2`; setting it differently models a miscalibrated decoder.

    Example:
        >>> params = CodeParams(r=1.0, xbar2=5.0, gamma=0.1)
        >>> params.decoder_xbar2
        5.0
    """

    model_config = ConfigDict(frozen=True)

    r: float = Field(..., allow_inf_nan=False)
    xbar2: float = Field(..., gt=0.0, allow_inf_nan=False)
    gamma: float = Field(..., ge=0.0, le=1.0)
    assumed_xbar2: float | None = Field(default=None, gt=0.0, allow_inf_nan=False)

    @property
    def decoder_xbar2(self) -> float:
        return self.xbar2 if self.assumed_xbar2 is None else self.assumed_xbar2

    @property
    def syndrome_variance(self) -> float:
        """Variance of each ancilla x-outcome, e^{-2r}/4."""
        return math.exp(-2.0 * self.r) / 4.0
