from .gaussian_state import (
    GaussianState,
    HomodyneUpdate,
    ScalarGaussian,
    block_is_uncorrelated,
    coherent,
    condition_on_x,
    displace,
    homodyne_update,
    is_physical,
    is_pure,
    marginal_x,
    overlap_pure,
    purity,
    squeezed_vacuum,
    tensor,
    vacuum,
)
from .symplectic import (
    SymplecticTransform,
    apply_symplectic,
    beam_splitter,
    identity,
    phase_shift,
    sign_flip,
    tritter,
    tritter_matrix,
)

__all__ = [
    "GaussianState",
    "HomodyneUpdate",
    "ScalarGaussian",
    "SymplecticTransform",
    "apply_symplectic",
    "beam_splitter",
    "block_is_uncorrelated",
    "coherent",
    "condition_on_x",
    "displace",
    "homodyne_update",
    "identity",
    "is_physical",
    "is_pure",
    "marginal_x",
    "overlap_pure",
    "phase_shift",
    "sign_flip",
    "purity",
    "squeezed_vacuum",
    "tensor",
    "tritter",
    "tritter_matrix",
    "vacuum",
]
