"""Shrinking-interval and cross-ratio-collapse experiments."""

import numpy as np
import pytest

from entropylab.lattice import (
    RegionSpec,
    cross_ratio,
    cross_ratio_collapse,
    equal_eta_family,
    ground_state_correlations,
    product_state_relative_entropy,
    shrink_experiment,
)

THREE_ARCS = RegionSpec([(0.2, 1.1), (2.0, 2.9), (4.1, 5.3)])
SCHEDULE = [0.9 * 0.62**k for k in range(8)]


def test_shrink_gaps_close():
    corr = ground_state_correlations(512)
    report = shrink_experiment(corr, THREE_ARCS, arc_index=0, schedule=SCHEDULE)
    assert len(report.steps) == len(SCHEDULE)
    assert report.eventually_monotone
    assert report.gaps[-1] < report.gaps[0]
    assert report.gaps[-1] < 5e-2


def test_shrink_target_is_remaining_arcs():
    corr = ground_state_correlations(128)
    report = shrink_experiment(corr, THREE_ARCS, arc_index=1, schedule=[0.9, 0.5])
    others = RegionSpec([THREE_ARCS.arcs[0], THREE_ARCS.arcs[2]])
    assert report.target == pytest.approx(
        product_state_relative_entropy(corr, others), abs=1e-14
    )


def test_shrink_keeps_left_endpoint():
    corr = ground_state_correlations(128)
    report = shrink_experiment(corr, THREE_ARCS, arc_index=0, schedule=[0.7])
    # one step at length 0.7 equals evaluating the region with that arc replaced
    arc = (0.2, 0.9)
    spec = RegionSpec([arc, THREE_ARCS.arcs[1], THREE_ARCS.arcs[2]])
    assert report.steps[0].value == pytest.approx(
        product_state_relative_entropy(corr, spec), abs=1e-14
    )


def test_shrink_final_step_may_empty_the_arc():
    corr = ground_state_correlations(64)
    tiny = 2.0 * np.pi / 64 / 10.0
    report = shrink_experiment(corr, THREE_ARCS, arc_index=0, schedule=[0.9, tiny])
    assert report.steps[-1].sites_in_arc == 0
    assert report.steps[-1].value == report.target
    assert report.steps[-1].gap == 0.0


def test_shrink_rejects_early_empty_step():
    corr = ground_state_correlations(64)
    tiny = 2.0 * np.pi / 64 / 10.0
    with pytest.raises(ValueError, match="before the final step"):
        shrink_experiment(corr, THREE_ARCS, arc_index=0, schedule=[tiny, 0.9])


def test_shrink_input_validation():
    corr = ground_state_correlations(64)
    with pytest.raises(ValueError, match="empty schedule"):
        shrink_experiment(corr, THREE_ARCS, arc_index=0, schedule=[])
    with pytest.raises(ValueError, match="out of range"):
        shrink_experiment(corr, THREE_ARCS, arc_index=3, schedule=[0.5])
    with pytest.raises(ValueError, match="strictly between"):
        shrink_experiment(corr, THREE_ARCS, arc_index=0, schedule=[7.0])
    with pytest.raises(ValueError, match="besides the scheduled"):
        shrink_experiment(corr, RegionSpec([(0.0, 1.0)]), arc_index=0, schedule=[0.5])


def test_collapse_equal_eta_family():
    spec = RegionSpec([(0.30, 1.45), (2.65, 4.10)])
    rng = np.random.default_rng(7)
    family = equal_eta_family(spec, 3, rng)
    corr = ground_state_correlations(512)
    report = cross_ratio_collapse(corr, family)
    assert len(report.values) == 4
    assert report.eta == pytest.approx(cross_ratio(spec), rel=1e-9)
    assert report.spread == max(report.values) - min(report.values)
    assert report.spread < 5e-2


def test_collapse_spread_decreases_with_size():
    spec = RegionSpec([(0.30, 1.45), (2.65, 4.10)])
    rng = np.random.default_rng(7)
    family = equal_eta_family(spec, 3, rng)
    spreads = [
        cross_ratio_collapse(ground_state_correlations(n), family).spread
        for n in (256, 512, 1024)
    ]
    assert spreads[1] < spreads[0]
    assert spreads[2] < spreads[1]


def test_collapse_rejects_distinct_cross_ratios():
    corr = ground_state_correlations(128)
    control = [
        RegionSpec([(0.30, 1.45), (2.65, 4.10)]),
        RegionSpec([(0.30, 1.00), (2.65, 4.60)]),
    ]
    with pytest.raises(ValueError, match="cross ratios differ"):
        cross_ratio_collapse(corr, control)


def test_collapse_needs_two_geometries():
    corr = ground_state_correlations(64)
    with pytest.raises(ValueError, match="at least two"):
        cross_ratio_collapse(corr, [RegionSpec([(0.30, 1.45), (2.65, 4.10)])])
