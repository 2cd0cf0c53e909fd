"""Circle geometry: lattice sites, arc regions and conformal invariants.

Regions are unions of arcs given in continuum angles; lattice sites are
assigned by a half-open convention so that a region and its complement
always partition the chain.  Lengths (chord by default, arc length behind
a flag) and the two-interval cross ratio are computed from the continuum
endpoints, never from site counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

__all__ = [
    "LatticeCircle",
    "RegionSpec",
    "lattice_region",
    "arc_sites",
    "chord_length",
    "arc_length",
    "interval_lengths",
    "cross_ratio",
    "rotated_region",
    "mobius_region",
    "equal_eta_family",
]


@dataclass(frozen=True)
class LatticeCircle:
    """Evenly spaced sites on the unit circle, antiperiodic fermion sector."""

    n_sites: int
    boundary_sector: str = field(default="antiperiodic", init=False)

    def __post_init__(self) -> None:
        if self.n_sites < 8 or self.n_sites % 2:
            raise ValueError("site count must be even and at least 8")

    @property
    def site_angles(self) -> np.ndarray:
        return np.arange(self.n_sites) * (TWO_PI / self.n_sites)


class RegionSpec:
    """A union of disjoint arcs on the circle, in angle coordinates.

    Arcs are stored sorted by starting angle, endpoints normalized into
    [0, 2pi); an arc whose stored end lies at or before its start wraps
    through angle zero.  Consecutive arcs must be separated by gaps of
    positive length, so the complement is again a valid RegionSpec and
    ``spec.complement().complement()`` returns the identical endpoints.
    """

    def __init__(self, arcs) -> None:
        cleaned = []
        for a, b in arcs:
            a = float(a) % TWO_PI
            b = float(b) % TWO_PI
            if a == b:
                raise ValueError("degenerate arc (zero or full length)")
            cleaned.append((a, b))
        cleaned.sort()
        ends = []
        for a, b in cleaned:
            ends.append(b if b > a else b + TWO_PI)
        for k in range(len(cleaned)):
            next_start = cleaned[k + 1][0] if k + 1 < len(cleaned) else cleaned[0][0] + TWO_PI
            if ends[k] >= next_start:
                raise ValueError("arcs must be separated by gaps of positive length")
        self.arcs: tuple[tuple[float, float], ...] = tuple(cleaned)

    def __repr__(self) -> str:
        inner = ", ".join(f"({a:.6f}, {b:.6f})" for a, b in self.arcs)
        return f"RegionSpec([{inner}])"

    def __eq__(self, other) -> bool:
        return isinstance(other, RegionSpec) and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash(self.arcs)

    def complement(self) -> "RegionSpec":
        """The complementary arcs, re-pairing the same stored endpoints."""
        n = len(self.arcs)
        gaps = [(self.arcs[k][1], self.arcs[(k + 1) % n][0]) for k in range(n)]
        return RegionSpec(gaps)


def arc_sites(circle: LatticeCircle, arc: tuple[float, float]) -> np.ndarray:
    """Sites with angle in [a, b), where an arc with b <= a wraps through 0."""
    theta = circle.site_angles
    a, b = arc
    if a < b:
        mask = (theta >= a) & (theta < b)
    else:
        mask = (theta >= a) | (theta < b)
    return np.nonzero(mask)[0]


def lattice_region(circle: LatticeCircle, spec: RegionSpec) -> np.ndarray:
    """Sorted site indices of the region; errors on empty region or complement."""
    parts = [arc_sites(circle, arc) for arc in spec.arcs]
    sites = np.concatenate(parts) if parts else np.array([], dtype=int)
    sites = np.sort(sites)
    if sites.size == 0:
        raise ValueError("region resolves to fewer than 1 site")
    if sites.size == circle.n_sites:
        raise ValueError("region leaves no complement sites")
    return sites


def chord_length(a: float, b: float) -> float:
    """|e^{ia} - e^{ib}|, the chord between two circle points."""
    value = 2.0 * abs(math.sin((b - a) / 2.0))
    if value == 0.0:
        raise ValueError("degenerate interval")
    return value


def arc_length(a: float, b: float) -> float:
    value = (b - a) % TWO_PI
    if value == 0.0:
        raise ValueError("degenerate interval")
    return value


def interval_lengths(spec: RegionSpec, use_arc_length: bool = False) -> tuple[float, ...]:
    measure = arc_length if use_arc_length else chord_length
    return tuple(measure(a, b) for a, b in spec.arcs)


def cross_ratio(spec: RegionSpec, use_arc_length: bool = False) -> float:
    """eta = r_J1 r_J2 / (r_I1 r_I2) for a two-interval region with complement J."""
    if len(spec.arcs) != 2:
        raise ValueError("cross ratio is defined for two-interval regions")
    r_in = interval_lengths(spec, use_arc_length)
    r_out = interval_lengths(spec.complement(), use_arc_length)
    return (r_out[0] * r_out[1]) / (r_in[0] * r_in[1])


def rotated_region(spec: RegionSpec, angle: float) -> RegionSpec:
    return RegionSpec([(a + angle, b + angle) for a, b in spec.arcs])


def mobius_region(spec: RegionSpec, pull: complex, phase: float = 0.0) -> RegionSpec:
    """Image of the region under the disk automorphism z -> e^{i phase}(z - pull)/(1 - conj(pull) z).

    Automorphisms of the disk preserve the circle, its orientation, and
    the cross ratio of any four boundary points, so the image of a
    two-interval region has exactly the same eta.
    """
    if abs(pull) >= 1.0:
        raise ValueError("pull point must lie inside the unit disk")

    def image(theta: float) -> float:
        z = complex(math.cos(theta), math.sin(theta))
        w = (z - pull) / (1.0 - pull.conjugate() * z)
        return (math.atan2(w.imag, w.real) + phase) % TWO_PI

    return RegionSpec([(image(a), image(b)) for a, b in spec.arcs])


def equal_eta_family(
    spec: RegionSpec, count: int, rng: np.random.Generator, max_pull: float = 0.45
) -> list[RegionSpec]:
    """The region plus ``count`` Moebius images of it, all sharing its cross ratio."""
    family = [spec]
    for _ in range(count):
        radius = max_pull * math.sqrt(rng.uniform())
        angle = rng.uniform(0.0, TWO_PI)
        pull = radius * complex(math.cos(angle), math.sin(angle))
        family.append(mobius_region(spec, pull, phase=rng.uniform(0.0, TWO_PI)))
    return family
