"""Free-fermion chain on a circle: Gaussian entropies, deficits, scaling."""

from .circle import (
    LatticeCircle,
    RegionSpec,
    arc_length,
    arc_sites,
    chord_length,
    cross_ratio,
    equal_eta_family,
    interval_lengths,
    lattice_region,
    mobius_region,
    rotated_region,
)
from .deficit import (
    DeficitReport,
    TwoDimensionalDeficitReport,
    entropy_deficit,
    regularized_entropy,
    two_dimensional_deficit,
)
from .exact import ExactEntropies, exact_diagonalization_entropies, ground_orbitals
from .experiments import (
    CollapseReport,
    ShrinkReport,
    ShrinkStep,
    cross_ratio_collapse,
    shrink_experiment,
)
from .gaussian import (
    CorrelationMatrix,
    ground_state_correlations,
    hopping_matrix,
    product_state_relative_entropy,
    region_entropy,
)
from .scaling import (
    CentralChargeFit,
    Extrapolation,
    central_charge_fit,
    finite_size_extrapolate,
)

__all__ = [
    "LatticeCircle",
    "RegionSpec",
    "arc_length",
    "arc_sites",
    "chord_length",
    "cross_ratio",
    "equal_eta_family",
    "interval_lengths",
    "lattice_region",
    "mobius_region",
    "rotated_region",
    "DeficitReport",
    "TwoDimensionalDeficitReport",
    "entropy_deficit",
    "regularized_entropy",
    "two_dimensional_deficit",
    "ExactEntropies",
    "exact_diagonalization_entropies",
    "ground_orbitals",
    "CollapseReport",
    "ShrinkReport",
    "ShrinkStep",
    "cross_ratio_collapse",
    "shrink_experiment",
    "CorrelationMatrix",
    "ground_state_correlations",
    "hopping_matrix",
    "product_state_relative_entropy",
    "region_entropy",
    "CentralChargeFit",
    "Extrapolation",
    "central_charge_fit",
    "finite_size_extrapolate",
]
