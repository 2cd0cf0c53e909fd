"""Ground-state correlations and Gaussian entropies for the hopping chain.

The chain is the half-filled nearest-neighbor model with imaginary hopping
amplitude in the antiperiodic (NS) momentum sector, whose single-particle
spectrum has no zero modes at any even size.  All entropies come from
eigenvalues of restricted correlation matrices via the Fermi kernel
-[nu ln nu + (1-nu) ln(1-nu)].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circle import LatticeCircle, RegionSpec, arc_sites, lattice_region

CLAMP = 1e-14
EIGENVALUE_SLACK = 1e-8

__all__ = [
    "CorrelationMatrix",
    "hopping_matrix",
    "ground_state_correlations",
    "region_entropy",
    "product_state_relative_entropy",
]


@dataclass(frozen=True)
class CorrelationMatrix:
    """Two-point functions <a_j^dag a_k> of the chain ground state."""

    matrix: np.ndarray
    n_sites: int

    def __post_init__(self) -> None:
        mat = self.matrix
        if mat.shape != (self.n_sites, self.n_sites):
            raise ValueError("matrix shape does not match the site count")
        if np.linalg.norm(mat - mat.conj().T) > 1e-10 * self.n_sites:
            raise ValueError("correlation matrix must be Hermitian")

    def restricted(self, sites: np.ndarray) -> np.ndarray:
        return self.matrix[np.ix_(sites, sites)]


def hopping_matrix(n_sites: int) -> np.ndarray:
    """Single-particle Hamiltonian: imaginary nearest-neighbor hopping,
    antiperiodic boundary link.  Dispersion -2 sin k over NS momenta."""
    h = np.zeros((n_sites, n_sites), dtype=complex)
    for j in range(n_sites - 1):
        h[j, j + 1] = 1j
        h[j + 1, j] = -1j
    h[n_sites - 1, 0] = -1j
    h[0, n_sites - 1] = 1j
    return h


@lru_cache(maxsize=8)
def ground_state_correlations(n_sites: int) -> CorrelationMatrix:
    """Spectral projector onto the filled (negative-energy) NS modes.

    Closed form: C_jk = 1/2 on the diagonal, i / (N sin(pi d / N)) for odd
    separation d = j - k, zero for even nonzero separation.  The expression
    is antiperiodic in d, matching the NS sector.
    """
    if n_sites % 2 or n_sites < 4:
        raise ValueError("site count must be even and at least 4")
    idx = np.arange(n_sites)
    diff = np.subtract.outer(idx, idx)
    odd = (diff % 2).astype(bool)
    mat = np.zeros((n_sites, n_sites), dtype=complex)
    mat[odd] = 1j / (n_sites * np.sin(np.pi * diff[odd] / n_sites))
    np.fill_diagonal(mat, 0.5)
    mat.flags.writeable = False
    return CorrelationMatrix(matrix=mat, n_sites=n_sites)


def _occupation_entropy(occupations: np.ndarray) -> float:
    if occupations.min() < -EIGENVALUE_SLACK or occupations.max() > 1 + EIGENVALUE_SLACK:
        raise ValueError(
            f"mode occupation outside [0, 1]: range "
            f"[{occupations.min():.3e}, {occupations.max():.3e}]"
        )
    nu = np.clip(occupations, CLAMP, 1.0 - CLAMP)
    return float(-np.sum(nu * np.log(nu) + (1.0 - nu) * np.log(1.0 - nu)))


def region_entropy(corr: CorrelationMatrix, sites: np.ndarray) -> float:
    """Entanglement entropy of a site set, in nats."""
    sites = np.asarray(sites, dtype=int)
    if sites.size == 0:
        raise ValueError("region must contain at least one site")
    return _occupation_entropy(np.linalg.eigvalsh(corr.restricted(sites)))


def product_state_relative_entropy(corr: CorrelationMatrix, spec: RegionSpec) -> float:
    """S(omega, omega_I1 x ... x omega_In) = sum_k S(I_k) - S(union).

    Equals the mutual information for two arcs and vanishes for one.
    Every arc must contain at least one site.
    """
    circle = LatticeCircle(corr.n_sites)
    if len(spec.arcs) == 1:
        lattice_region(circle, spec)
        return 0.0
    parts = []
    for arc in spec.arcs:
        sites = arc_sites(circle, arc)
        if sites.size == 0:
            raise ValueError(f"arc ({arc[0]:.4f}, {arc[1]:.4f}) contains no lattice sites")
        parts.append(sites)
    union = np.sort(np.concatenate(parts))
    if union.size == circle.n_sites:
        raise ValueError("region leaves no complement sites")
    total = sum(region_entropy(corr, sites) for sites in parts)
    return total - region_entropy(corr, union)
