"""Sequence experiments: interval shrinking and cross-ratio collapse."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle import (
    TWO_PI,
    LatticeCircle,
    RegionSpec,
    arc_sites,
    cross_ratio,
)
from .gaussian import CorrelationMatrix, product_state_relative_entropy

__all__ = [
    "ShrinkStep",
    "ShrinkReport",
    "shrink_experiment",
    "CollapseReport",
    "cross_ratio_collapse",
]


@dataclass(frozen=True)
class ShrinkStep:
    length: float
    sites_in_arc: int
    value: float
    gap: float


@dataclass(frozen=True)
class ShrinkReport:
    steps: tuple[ShrinkStep, ...]
    target: float
    monotone_from: int

    @property
    def gaps(self) -> tuple[float, ...]:
        return tuple(step.gap for step in self.steps)

    @property
    def eventually_monotone(self) -> bool:
        return self.monotone_from < max(1, len(self.steps) - 1)


def shrink_experiment(
    corr: CorrelationMatrix,
    spec: RegionSpec,
    arc_index: int,
    schedule: list[float],
) -> ShrinkReport:
    """Track S(omega, omega-product) while one arc's length runs a schedule.

    ``arc_index`` refers to the sorted arcs of ``spec``; the arc keeps its
    left endpoint and its length is replaced by each schedule entry in
    turn.  The target is the product-state relative entropy of the
    remaining arcs alone, which the value approaches as the scheduled arc
    shrinks away.  Only the final step may leave the arc without sites.
    """
    if not schedule:
        raise ValueError("empty schedule")
    if not 0 <= arc_index < len(spec.arcs):
        raise ValueError("arc index out of range")
    circle = LatticeCircle(corr.n_sites)
    start = spec.arcs[arc_index][0]
    others = [arc for k, arc in enumerate(spec.arcs) if k != arc_index]
    if not others:
        raise ValueError("need at least one arc besides the scheduled one")
    target = product_state_relative_entropy(corr, RegionSpec(others))

    steps = []
    for position, length in enumerate(schedule):
        if not 0 < length < TWO_PI:
            raise ValueError("schedule lengths must lie strictly between 0 and 2*pi")
        arc = (start, (start + length) % TWO_PI)
        occupied = arc_sites(circle, arc).size
        if occupied == 0:
            if position != len(schedule) - 1:
                raise ValueError("schedule empties the arc before the final step")
            value = target
        else:
            value = product_state_relative_entropy(corr, RegionSpec(others + [arc]))
        steps.append(
            ShrinkStep(
                length=length,
                sites_in_arc=occupied,
                value=value,
                gap=value - target,
            )
        )

    gaps = [s.gap for s in steps]
    monotone_from = len(steps) - 1
    for k in range(len(steps)):
        if all(gaps[i + 1] <= gaps[i] + 1e-12 for i in range(k, len(steps) - 1)):
            monotone_from = k
            break
    return ShrinkReport(steps=tuple(steps), target=target, monotone_from=monotone_from)


@dataclass(frozen=True)
class CollapseReport:
    eta: float
    values: tuple[float, ...]
    spread: float


def cross_ratio_collapse(
    corr: CorrelationMatrix,
    specs: list[RegionSpec],
    eta_tolerance: float = 1e-12,
    use_arc_length: bool = False,
) -> CollapseReport:
    """Product-state relative entropies of several equal-cross-ratio regions.

    All regions must have two arcs and the same eta within ``eta_tolerance``
    (that is the hypothesis that makes the values comparable); the report
    carries the maximum pairwise spread.
    """
    if len(specs) < 2:
        raise ValueError("need at least two geometries to compare")
    etas = [cross_ratio(spec, use_arc_length) for spec in specs]
    if max(etas) - min(etas) > eta_tolerance:
        raise ValueError(
            f"cross ratios differ beyond tolerance: spread {max(etas) - min(etas):.3e}"
        )
    values = tuple(product_state_relative_entropy(corr, spec) for spec in specs)
    return CollapseReport(
        eta=float(np.mean(etas)),
        values=values,
        spread=max(values) - min(values),
    )
