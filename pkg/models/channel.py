from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from mixtures import GaussianMixture


class XDisplacement(BaseModel):
    """
    Error branch shifting the x-quadrature of the affected mode.

    Attributes:
        kind (str): Discriminator, always "x_displacement".
        shift (float): The x-shift applied when the error occurs.

    Example:
        >>> XDisplacement(shift=2.0)
        XDisplacement(kind='x_displacement', shift=2.0)
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["x_displacement"] = "x_displacement"
    shift: float = Field(..., allow_inf_nan=False)


class GeneralDisplacement(BaseModel):
    """
    Error branch shifting both quadratures of the affected mode.

    Attributes:
        kind (str): Discriminator, always "general_displacement".
        dx (float): x-shift.
        dp (float): p-shift.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["general_displacement"] = "general_displacement"
    dx: float = Field(..., allow_inf_nan=False)
    dp: float = Field(..., allow_inf_nan=False)


class Replacement(BaseModel):
    """
    Error branch replacing the affected mode by a fixed single-mode state.

    With the vacuum as replacement this is the erasure channel.

    Attributes:
        kind (str): Discriminator, always "replacement".
        state (GaussianMixture): Single-mode replacement state.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["replacement"] = "replacement"
    state: GaussianMixture

    @field_validator("state")
    @classmethod
    def _single_mode(cls, state: GaussianMixture) -> GaussianMixture:
        if state.n != 1:
            raise ValueError(f"Replacement state must have exactly 1 mode, got {state.n}")
        return state


ErrorBranch = Annotated[Union[XDisplacement, GeneralDisplacement, Replacement], Field(discriminator="kind")]


class StochasticChannel(BaseModel):
    """
    Channel leaving a mode untouched with probability 1 - gamma and applying an
    error branch with probability gamma.

    Attributes:
        gamma (float): Error probability in [0, 1].
        branch (ErrorBranch): What happens to the mode when the error occurs.

    Example:
        >>> channel = StochasticChannel(gamma=0.1, branch=XDisplacement(shift=5.0))
        >>> channel.gamma
        0.1
    """

    model_config = ConfigDict(frozen=True)

    gamma: float = Field(..., ge=0.0, le=1.0)
    branch: ErrorBranch


class BranchRecord(BaseModel):
    """
    One term of the error expansion after decoding.

    Attributes:
        pattern (tuple[bool, bool, bool]): Per-channel error flags.
        weight (float): Probability of the pattern.
        mode1_x_shift (float): Decoded x-shift of the signal mode.
        ancilla_shifts (tuple[float, float]): Decoded x-shifts of the two ancillas.
    """

    model_config = ConfigDict(frozen=True)

    pattern: tuple[bool, bool, bool]
    weight: float = Field(..., ge=0.0, le=1.0)
    mode1_x_shift: float
    ancilla_shifts: tuple[float, float]

    @property
    def errored_channels(self) -> tuple[int, ...]:
        return tuple(i for i, flag in enumerate(self.pattern) if flag)

    @property
    def name(self) -> str:
        """Channels in error, 1-based ("none" for the error-free pattern)."""
        return "".join(str(i + 1) for i in self.errored_channels) or "none"
