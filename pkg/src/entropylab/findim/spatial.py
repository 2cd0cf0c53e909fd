"""Spatial derivatives, modular flow, cocycles and relative entropy.

The spatial derivative of a weight psi on M relative to a weight phi' on
the commutant M' is assembled block by block from the intrinsic density
matrices: on the k-th summand C^{n_k} tensor C^{m_k} it acts as

    rho_k(psi)  tensor  sigma'_k(phi')^{-1},

which commutes factor-wise, is positive, and implements the modular flow
of psi on M and the inverse flow of phi' on M'.  Relative entropy is
computed both through this operator (vector-state form) and through the
block trace formula; the two must agree on factors and the tests hold
them to that.
"""

from __future__ import annotations

import math

import numpy as np

from .algebras import MatrixBlockAlgebra
from .states import SUPPORT_CUTOFF, VectorStateData, WeightDensity, canonical_density

__all__ = [
    "spatial_derivative",
    "modular_flow",
    "connes_cocycle",
    "relative_entropy_spatial",
    "relative_entropy_umegaki",
]

# Vector mass on a kernel below this is treated as numerically zero
# (above it the support condition fails and the entropy is +inf).
KERNEL_MASS_TOL = 1e-10


def _as_commutant_weight(
    psi: WeightDensity, phi_c: WeightDensity
) -> tuple[MatrixBlockAlgebra, WeightDensity]:
    """Return (algebra of psi, phi_c rewrapped on the linked commutant).

    Intrinsic blocks depend on the structure isometries, so a weight handed
    over on an independently built (span-equal) commutant is re-expressed
    through its gauge-independent ambient matrix.
    """
    algebra = psi.algebra
    dual = algebra.commutant()
    if phi_c.algebra is dual:
        return algebra, phi_c
    if not phi_c.algebra.span_equals(dual):
        raise ValueError("second weight must live on the commutant of the first")
    return algebra, WeightDensity(dual, phi_c.matrix)


def _hermitian_power(mat: np.ndarray, exponent: complex) -> np.ndarray:
    """mat**exponent on the support of a PSD matrix (zero on the kernel)."""
    vals, vecs = np.linalg.eigh(mat)
    cutoff = SUPPORT_CUTOFF * max(1.0, float(vals[-1]) if vals.size else 1.0)
    out = np.zeros(vals.shape, dtype=complex)
    keep = vals > cutoff
    out[keep] = np.exp(exponent * np.log(vals[keep]))
    return (vecs * out) @ vecs.conj().T


def spatial_derivative(psi: WeightDensity, phi_c: WeightDensity) -> np.ndarray:
    """Spatial derivative Delta(psi / phi_c) as a positive D x D matrix.

    ``psi`` is a weight on M, ``phi_c`` a faithful weight on the commutant
    M'.  The result is the block-wise product of the intrinsic density of
    psi with the inverse intrinsic density of phi_c (commuting positive
    factors).
    """
    algebra, phi_c = _as_commutant_weight(psi, phi_c)
    if not phi_c.is_faithful:
        raise ValueError("commutant weight must be faithful")
    rho = psi.intrinsic_blocks()
    sig = phi_c.intrinsic_blocks()
    out = np.zeros((algebra.ambient_dim, algebra.ambient_dim), dtype=complex)
    for blk, rho_k, sig_k in zip(algebra.structure, rho, sig):
        inv = _hermitian_power(sig_k, -1.0)
        out += blk.iso.conj().T @ np.kron(rho_k, inv) @ blk.iso
    return out


def modular_flow(psi: WeightDensity, x: np.ndarray, t: float) -> np.ndarray:
    """sigma_t^psi(x) for x in the algebra of psi (psi faithful)."""
    if not psi.is_faithful:
        raise ValueError("modular flow needs a faithful weight; restrict to the support first")
    algebra = psi.algebra
    if not algebra.contains(x, tol=1e-8):
        raise ValueError("element does not lie in the algebra of the weight")
    parts = algebra.matrix_blocks(x)
    flowed = []
    for rho_k, xk in zip(psi.intrinsic_blocks(), parts):
        u = _hermitian_power(rho_k, 1j * t)
        flowed.append(u @ xk @ u.conj().T)
    return algebra.embed_blocks(flowed)


def connes_cocycle(
    psi1: WeightDensity,
    psi2: WeightDensity,
    t: float,
    reference: WeightDensity | None = None,
) -> np.ndarray:
    """Connes cocycle [D psi1 : D psi2]_t as an element of the algebra.

    With ``reference`` a faithful weight on the commutant the cocycle is
    computed as Delta(psi1/ref)^{it} Delta(psi2/ref)^{-it}; the result does
    not depend on that choice.  Without a reference the block formula
    rho_1^{it} rho_2^{-it} is used directly.
    """
    algebra = psi1.algebra
    if psi2.algebra is not algebra:
        if not psi2.algebra.span_equals(algebra):
            raise ValueError("cocycle weights must live on the same algebra")
        psi2 = WeightDensity(algebra, psi2.matrix)
    if not psi2.is_faithful:
        raise ValueError("second cocycle weight must be faithful")
    if reference is not None:
        d1 = spatial_derivative(psi1, reference)
        d2 = spatial_derivative(psi2, reference)
        u = _hermitian_power(d1, 1j * t) @ _hermitian_power(d2, -1j * t)
        return algebra.project(u)
    parts = []
    for rho1, rho2 in zip(psi1.intrinsic_blocks(), psi2.intrinsic_blocks()):
        parts.append(_hermitian_power(rho1, 1j * t) @ _hermitian_power(rho2, -1j * t))
    return algebra.embed_blocks(parts)


def relative_entropy_spatial(omega: VectorStateData, phi: WeightDensity) -> float:
    """S(omega, phi) = -<ln Delta(phi/omega') Omega, Omega> in nats.

    ``omega`` is the vector state of Omega on the algebra of ``phi``;
    omega' is its vector state on the commutant.  Returns +inf when the
    support of phi fails to dominate the state of Omega on the algebra.
    """
    algebra = phi.algebra
    if omega.algebra is not algebra and not omega.algebra.span_equals(algebra):
        raise ValueError("vector state and weight must refer to the same algebra")
    vec = omega.vector
    omega_c = omega.commutant_state() if omega.algebra is algebra else canonical_density(
        algebra.commutant(), np.outer(vec, vec.conj())
    )
    sig = phi.intrinsic_blocks()
    rho_c = omega_c.intrinsic_blocks()
    total = 0.0
    kernel_mass = 0.0
    for blk, sig_k, rc_k in zip(algebra.structure, sig, rho_c):
        inv = _hermitian_power(rc_k, -1.0)
        delta_k = np.kron(sig_k, inv)
        vals, vecs = np.linalg.eigh((delta_k + delta_k.conj().T) / 2)
        local = blk.iso @ vec
        weights = np.abs(vecs.conj().T @ local) ** 2
        cutoff = SUPPORT_CUTOFF * max(1.0, float(vals[-1]) if vals.size else 1.0)
        # Mass sitting on ker(sigma_k) tensor supp(rho'_k) signals a genuine
        # support violation; mass on the rho'_k kernel is zero by construction.
        kernel_mass += float(np.sum(weights[vals <= cutoff]))
        keep = vals > cutoff
        total -= float(np.sum(weights[keep] * np.log(vals[keep])))
    if kernel_mass > KERNEL_MASS_TOL:
        return math.inf
    return total


def relative_entropy_umegaki(rho: WeightDensity, sigma: WeightDensity) -> float:
    """Block trace formula sum_k Tr[rho_k (ln rho_k - ln sigma_k)] in nats.

    Works for weights as well as states; +inf when the support condition
    supp(rho) <= supp(sigma) fails on any block.
    """
    if rho.algebra is not sigma.algebra and not rho.algebra.span_equals(sigma.algebra):
        raise ValueError("relative entropy needs two functionals on the same algebra")
    total = 0.0
    for rho_k, sig_k in zip(rho.intrinsic_blocks(), sigma.intrinsic_blocks()):
        p_vals, p_vecs = np.linalg.eigh(rho_k)
        s_vals, s_vecs = np.linalg.eigh(sig_k)
        p_cut = SUPPORT_CUTOFF * max(1.0, float(p_vals[-1]) if p_vals.size else 1.0)
        s_cut = SUPPORT_CUTOFF * max(1.0, float(s_vals[-1]) if s_vals.size else 1.0)
        s_kernel = s_vecs[:, s_vals <= s_cut]
        if s_kernel.shape[1]:
            escaped = float(
                np.real(np.trace(s_kernel.conj().T @ rho_k @ s_kernel))
            )
            if escaped > KERNEL_MASS_TOL:
                return math.inf
        keep_p = p_vals > p_cut
        total += float(np.sum(p_vals[keep_p] * np.log(p_vals[keep_p])))
        keep_s = s_vals > s_cut
        overlap = np.abs(s_vecs[:, keep_s].conj().T @ p_vecs) ** 2 @ p_vals
        total -= float(np.sum(overlap * np.log(s_vals[keep_s])))
    return total
