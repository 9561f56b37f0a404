from pydantic import BaseModel, ConfigDict, Field

from mixtures import GaussianMixture
from models.syndrome import SyndromeClass


class ProtocolRun(BaseModel):
    """
    Outcome of one simulated error-correction round.

    Attributes:
        x2 (float): Measured x-outcome of ancilla mode 2.
        x3 (float): Measured x-outcome of ancilla mode 3.
        cls (SyndromeClass): Assigned error class.
        output (GaussianMixture): Recovered single-mode state of the signal mode.
        fid (float): Fidelity of `output` with the input signal, in [0, 1].
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x2: float
    x3: float
    cls: SyndromeClass
    output: GaussianMixture
    fid: float = Field(..., ge=0.0, le=1.0)
