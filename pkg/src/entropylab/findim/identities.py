"""Verification operations for the relative-entropy identities.

Each function builds nothing by itself: it takes a prepared instance
(algebras, a vector, expectations) and evaluates both sides of one
identity, returning the pieces and the residual.  Instance generators
for randomized suites live here too, so a seeded generator plus a check
function is one reproducible test case.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebras import MatrixBlockAlgebra, build_algebra
from .expectations import (
    ConditionalExpectationMap,
    compose_expectations,
    group_average_expectation,
    state_preserving_expectation,
    weyl_unitaries,
)
from .index import dual_weight
from .spatial import relative_entropy_spatial, relative_entropy_umegaki
from .states import (
    VectorStateData,
    WeightDensity,
    canonical_density,
    random_faithful_state,
    trace_state,
)

__all__ = [
    "random_unitary",
    "DifferenceInstance",
    "random_difference_instance",
    "DifferenceReport",
    "entropy_difference_identity",
    "ChainInstance",
    "random_chain_instance",
    "ChainReport",
    "entropy_additivity_chain",
    "IdentityCheckReport",
    "check_entropy_identity",
]


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def _leg_average(
    algebra: MatrixBlockAlgebra,
    left_dim: int,
    sub_dim: int,
    right_dim: int,
    conjugator: np.ndarray | None = None,
) -> ConditionalExpectationMap:
    """Average over shift-and-clock unitaries on the middle tensor leg.

    The unitaries act as 1 (x) w (x) 1 on C^left (x) C^sub (x) C^right,
    optionally conjugated; the target is everything commuting with that leg.
    """
    units = []
    for w in weyl_unitaries(sub_dim):
        u = np.kron(np.kron(np.eye(left_dim), w), np.eye(right_dim))
        if conjugator is not None:
            u = conjugator @ u @ conjugator.conj().T
        units.append(u)
    return group_average_expectation(algebra, units)


# ---------------------------------------------------------------------------
# The difference identity: S(w, wE1) - S(w, wE2) = S(w, wE1 E2^dual)


@dataclass(frozen=True)
class DifferenceInstance:
    algebra: MatrixBlockAlgebra
    omega: VectorStateData
    e1: ConditionalExpectationMap
    e2: ConditionalExpectationMap
    seed_note: str = ""


@dataclass(frozen=True)
class DifferenceReport:
    s1: float
    s2: float
    s12: float
    residual: float


def random_difference_instance(
    rng: np.random.Generator, side: int = 4
) -> DifferenceInstance:
    """A bipartite factor with expectations on both sides of the commutant.

    ``side`` is the dimension of each tensor leg (2, 3 or 4).  For side 4
    the expectations average out half of a leg; for prime sides they
    depolarize the whole leg.
    """
    if side not in (2, 3, 4):
        raise ValueError("side must be 2, 3 or 4 to keep the ambient dimension small")
    algebra = build_algebra([(side, side)])
    dual = algebra.commutant()
    dim = side * side

    omega = None
    for _ in range(8):
        cand = VectorStateData(algebra, _random_vector(dim, rng))
        if cand.cyclic and cand.separating:
            omega = cand
            break
    if omega is None:
        raise RuntimeError("failed to sample a cyclic and separating vector")

    if side == 4:
        u1 = np.kron(random_unitary(4, rng), np.eye(4))
        e1 = _leg_average(algebra, 2, 2, 4, conjugator=u1)
        u2 = np.kron(np.eye(4), random_unitary(4, rng))
        e2 = _leg_average(dual, 4 * 2, 2, 1, conjugator=u2)
    else:
        u1 = np.kron(random_unitary(side, rng), np.eye(side))
        e1 = _leg_average(algebra, 1, side, side, conjugator=u1)
        u2 = np.kron(np.eye(side), random_unitary(side, rng))
        e2 = _leg_average(dual, side, side, 1, conjugator=u2)
    return DifferenceInstance(algebra=algebra, omega=omega, e1=e1, e2=e2)


def entropy_difference_identity(instance: DifferenceInstance) -> DifferenceReport:
    """Evaluate S(w,wE1), S(w,wE2) and S(w, wE1 composed with the dual of E2).

    E1 expects the algebra onto a subfactor, E2 does the same on the
    commutant; the third term lives on the commutant of E2's target, with
    the weight obtained from the dual of E2 applied to wE1.
    """
    omega = instance.omega
    if not (omega.cyclic and omega.separating):
        raise ValueError("vector must be cyclic and separating for the algebra")
    algebra = instance.algebra
    dual = algebra.commutant()
    if instance.e1.source is not algebra or instance.e2.source is not dual:
        raise ValueError("expectations must be rooted at the algebra and its commutant")
    vec = omega.vector
    rank_one = np.outer(vec, vec.conj())

    we1 = instance.e1.pull_back(rank_one)
    s1 = relative_entropy_spatial(omega, we1)

    omega_dual = VectorStateData(dual, vec)
    we2 = instance.e2.pull_back(rank_one)
    s2 = relative_entropy_spatial(omega_dual, we2)

    chi = dual_weight(instance.e2, we1)
    omega_outer = VectorStateData(chi.algebra, vec)
    s12 = relative_entropy_spatial(omega_outer, chi)

    return DifferenceReport(s1=s1, s2=s2, s12=s12, residual=abs(s1 - s2 - s12))


# ---------------------------------------------------------------------------
# Additivity along a chain N3 in N2 in N1


@dataclass(frozen=True)
class ChainInstance:
    n1: MatrixBlockAlgebra
    n2: MatrixBlockAlgebra
    n3: MatrixBlockAlgebra
    omega: VectorStateData
    f1: ConditionalExpectationMap
    f2: ConditionalExpectationMap


@dataclass(frozen=True)
class ChainReport:
    s_composed: float
    s_f2: float
    s_f1: float
    residual: float


@lru_cache(maxsize=1)
def _base_chain() -> tuple[MatrixBlockAlgebra, ...]:
    n1 = build_algebra([(8, 2)])
    n2 = build_algebra([(4, 4)])
    n3 = build_algebra([(2, 8)])
    f1 = _leg_average(n1, 4, 2, 2)
    f2 = _leg_average(n2, 2, 2, 4)
    return n1, n2, n3, f1, f2


def random_chain_instance(rng: np.random.Generator) -> ChainInstance:
    """Three nested tensor-leg factors, rotated by a Haar unitary, with a
    random vector.

    The middle algebra is square in the ambient space, so a generic vector
    is cyclic and separating for it, which is what the additivity statement
    needs.  The reference chain is built once; randomness enters through the
    global rotation and the vector.
    """
    n1, n2, n3, f1, f2 = _base_chain()
    u = random_unitary(16, rng)
    f1 = f1.conjugated(u)
    f2 = f2.conjugated(u)
    n1, n2, n3 = f1.source, f2.source, f2.target
    omega = None
    for _ in range(8):
        cand = VectorStateData(n2, _random_vector(16, rng))
        if cand.cyclic and cand.separating:
            omega = cand
            break
    if omega is None:
        raise RuntimeError("failed to sample a cyclic and separating vector")
    return ChainInstance(n1=n1, n2=n2, n3=n3, omega=omega, f1=f1, f2=f2)


def entropy_additivity_chain(instance: ChainInstance) -> ChainReport:
    """S(w, w F2 F1) against S(w, w F2) + S(w, w F1) on the chain."""
    omega = instance.omega
    if not (omega.cyclic and omega.separating):
        raise ValueError("vector must be cyclic and separating for the middle algebra")
    vec = omega.vector
    rank_one = np.outer(vec, vec.conj())

    composed = compose_expectations(instance.f1, instance.f2)
    on_n1 = VectorStateData(instance.n1, vec)
    s_both = relative_entropy_spatial(on_n1, composed.pull_back(rank_one))
    s_f1 = relative_entropy_spatial(on_n1, instance.f1.pull_back(rank_one))
    s_f2 = relative_entropy_spatial(
        VectorStateData(instance.n2, vec), instance.f2.pull_back(rank_one)
    )
    return ChainReport(
        s_composed=s_both,
        s_f2=s_f2,
        s_f1=s_f1,
        residual=abs(s_both - s_f2 - s_f1),
    )


# ---------------------------------------------------------------------------
# The five standard relative-entropy properties


@dataclass(frozen=True)
class IdentityCheckReport:
    which: int
    residual: float
    tolerance: float
    passed: bool
    values: dict


_TOLERANCES = {1: 1e-8, 2: 1e-9, 3: 1e-9, 4: 1e-9, 5: 1e-8}


def check_entropy_identity(
    which: int, rng: np.random.Generator | None = None
) -> IdentityCheckReport:
    """Check one of the five textbook properties of relative entropy.

    1: chain rule across a trace-preserving expectation,
    2: monotone convergence along a finite filtration of subalgebras,
    3: the bound S(w, w1) <= ln(1/mu) when w1 dominates mu*w,
    4: monotonicity under restriction to a subalgebra,
    5: the three-term splitting over a tensor product.

    The residual is the identity violation (or the amount by which an
    inequality is exceeded); instances are random but fully determined
    by the generator state.
    """
    rng = rng or np.random.default_rng(2024)
    if which == 1:
        report = _check_chain_rule(rng)
    elif which == 2:
        report = _check_filtration(rng)
    elif which == 3:
        report = _check_domination_bound(rng)
    elif which == 4:
        report = _check_restriction_monotonicity(rng)
    elif which == 5:
        report = _check_tensor_splitting(rng)
    else:
        raise ValueError("which must be between 1 and 5")
    return report


def _restricted(state: WeightDensity, algebra: MatrixBlockAlgebra) -> WeightDensity:
    return canonical_density(algebra, state.matrix)


def _check_chain_rule(rng: np.random.Generator) -> IdentityCheckReport:
    d, e = int(rng.integers(2, 4)), 2
    full = build_algebra([(d * e, 1)])
    u = random_unitary(d * e, rng)
    sub = build_algebra([(d, e)]).conjugated(u)
    exp = state_preserving_expectation(full, sub, trace_state(full))
    omega = random_faithful_state(full, rng)
    psi = random_faithful_state(sub, rng)
    lhs = relative_entropy_umegaki(omega, exp.pull_back(psi))
    mid = relative_entropy_umegaki(_restricted(omega, sub), psi)
    tail = relative_entropy_umegaki(omega, exp.pull_back(omega))
    residual = abs(lhs - mid - tail)
    tol = _TOLERANCES[1]
    return IdentityCheckReport(
        which=1,
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
        values={"joint": lhs, "restricted": mid, "expectation_term": tail},
    )


def _check_filtration(rng: np.random.Generator) -> IdentityCheckReport:
    full = build_algebra([(8, 1)])
    tower = [build_algebra([(2, 4)]), build_algebra([(4, 2)]), build_algebra([(8, 1)])]
    omega1 = random_faithful_state(full, rng)
    omega2 = random_faithful_state(full, rng)
    values = [
        relative_entropy_umegaki(_restricted(omega1, m), _restricted(omega2, m))
        for m in tower
    ]
    final = relative_entropy_umegaki(omega1, omega2)
    slack = max(
        max(values[i] - values[i + 1] for i in range(len(values) - 1)),
        abs(values[-1] - final),
    )
    residual = max(0.0, slack)
    tol = _TOLERANCES[2]
    return IdentityCheckReport(
        which=2,
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
        values={"sequence": tuple(values), "full": final},
    )


def _check_domination_bound(rng: np.random.Generator) -> IdentityCheckReport:
    d = int(rng.integers(2, 5))
    full = build_algebra([(d, 1)])
    omega = random_faithful_state(full, rng)
    chi = random_faithful_state(full, rng)
    mu = float(rng.uniform(0.2, 0.9))
    dominating = omega.mixed_with(chi, mu)
    value = relative_entropy_umegaki(omega, dominating)
    residual = max(0.0, value - np.log(1.0 / mu))
    tol = _TOLERANCES[3]
    return IdentityCheckReport(
        which=3,
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
        values={"entropy": value, "bound": float(np.log(1.0 / mu)), "mu": mu},
    )


def _check_restriction_monotonicity(rng: np.random.Generator) -> IdentityCheckReport:
    d, e = int(rng.integers(2, 4)), 2
    full = build_algebra([(d * e, 1)])
    sub = build_algebra([(d, e)]).conjugated(random_unitary(d * e, rng))
    omega = random_faithful_state(full, rng)
    phi = random_faithful_state(full, rng)
    big = relative_entropy_umegaki(omega, phi)
    small = relative_entropy_umegaki(_restricted(omega, sub), _restricted(phi, sub))
    residual = max(0.0, small - big)
    tol = _TOLERANCES[4]
    return IdentityCheckReport(
        which=4,
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
        values={"full": big, "restricted": small},
    )


def _check_tensor_splitting(rng: np.random.Generator) -> IdentityCheckReport:
    d1 = int(rng.integers(2, 5))
    d2 = int(rng.integers(2, 5))
    full = build_algebra([(d1 * d2, 1)])
    left = build_algebra([(d1, d2)])
    right = left.commutant()
    phi = random_faithful_state(full, rng)
    phi1 = _restricted(phi, left)
    phi2 = _restricted(phi, right)
    psi1 = random_faithful_state(left, rng)
    psi2 = random_faithful_state(right, rng)

    def product_density(a: WeightDensity, b: WeightDensity) -> WeightDensity:
        mat = np.kron(a.intrinsic_blocks()[0], b.intrinsic_blocks()[0])
        return WeightDensity(full, mat)

    lhs = relative_entropy_umegaki(phi, product_density(psi1, psi2))
    split = relative_entropy_umegaki(phi1, psi1) + relative_entropy_umegaki(phi2, psi2)
    inner = relative_entropy_umegaki(phi, product_density(phi1, phi2))
    residual = abs(lhs - split - inner)
    tol = _TOLERANCES[5]
    return IdentityCheckReport(
        which=5,
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
        values={"joint": lhs, "marginal_sum": split, "correlation": inner},
    )
