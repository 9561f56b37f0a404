from .channel import BranchRecord, ErrorBranch, GeneralDisplacement, Replacement, StochasticChannel, XDisplacement
from .code_params import CodeParams
from .estimate import McEstimate
from .protocol_run import ProtocolRun
from .sweep import SWEEP_COLUMNS, SweepRow, SweepSpec
from .syndrome import Policy, Sign, SyndromeClass

__all__ = [
    "BranchRecord",
    "CodeParams",
    "ErrorBranch",
    "GeneralDisplacement",
    "McEstimate",
    "Policy",
    "ProtocolRun",
    "Replacement",
    "SWEEP_COLUMNS",
    "Sign",
    "StochasticChannel",
    "SweepRow",
    "SweepSpec",
    "SyndromeClass",
    "XDisplacement",
]
