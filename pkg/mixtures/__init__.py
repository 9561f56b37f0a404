from .gaussian_mixture import (
    DEFAULT_PRUNE_EPSILON,
    Displacement,
    GaussianMixture,
    WeightedComponent,
    condition,
    fidelity_to_pure,
    homodyne_density,
    map_components,
    mean_x,
    mix,
    prune,
    pure,
    sample_component,
    sample_homodyne,
    variance_x,
)

__all__ = [
    "DEFAULT_PRUNE_EPSILON",
    "Displacement",
    "GaussianMixture",
    "WeightedComponent",
    "condition",
    "fidelity_to_pure",
    "homodyne_density",
    "map_components",
    "mean_x",
    "mix",
    "prune",
    "pure",
    "sample_component",
    "sample_homodyne",
    "variance_x",
]
