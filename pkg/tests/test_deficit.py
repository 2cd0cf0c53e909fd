"""Regularized entropies, the region/complement deficit, and the fits."""

import math

import numpy as np
import pytest

from entropylab.lattice import (
    RegionSpec,
    central_charge_fit,
    entropy_deficit,
    finite_size_extrapolate,
    ground_state_correlations,
    lattice_region,
    region_entropy,
    regularized_entropy,
    two_dimensional_deficit,
)
from entropylab.lattice.circle import LatticeCircle

TWO_ARCS = RegionSpec([(0.30, 1.45), (2.65, 4.10)])


def test_deficit_report_fields():
    corr = ground_state_correlations(128)
    report = entropy_deficit(corr, TWO_ARCS, c=2.0)
    assert report.n_sites == 128
    assert report.c == 2.0
    assert report.mu == 1.0
    assert report.dual_deficit == 0.0
    assert report.eta is not None
    assert len(report.region_lengths) == 2
    assert len(report.complement_lengths) == 2
    assert report.deficit == report.g_region - report.g_complement


def test_deficit_two_routes_agree():
    # the cross-ratio rearrangement is verified inside entropy_deficit and
    # raises ArithmeticError on mismatch; surviving the call is the check
    corr = ground_state_correlations(256)
    report = entropy_deficit(corr, TWO_ARCS, c=2.0)
    via_eta = -(report.c / 6.0) * math.log(report.eta) - report.s_region + report.s_complement
    assert report.deficit == pytest.approx(via_eta, abs=1e-12)


def test_deficit_three_arcs_has_no_eta():
    spec = RegionSpec([(0.2, 1.1), (2.0, 2.9), (4.1, 5.3)])
    corr = ground_state_correlations(128)
    report = entropy_deficit(corr, spec, c=2.0)
    assert report.eta is None
    assert len(report.region_lengths) == 3


def test_deficit_requires_two_arcs():
    corr = ground_state_correlations(64)
    with pytest.raises(ValueError):
        entropy_deficit(corr, RegionSpec([(0.0, 1.0)]), c=2.0)


def test_deficit_rejects_nonpositive_charge():
    corr = ground_state_correlations(64)
    with pytest.raises(ValueError):
        entropy_deficit(corr, TWO_ARCS, c=0.0)
    with pytest.raises(ValueError):
        regularized_entropy(corr, TWO_ARCS, c=-1.0)


def test_regularized_entropy_single_arc_is_geometry_term():
    corr = ground_state_correlations(64)
    spec = RegionSpec([(0.3, 1.45)])
    lengths = 2.0 * math.sin((1.45 - 0.3) / 2.0)
    got = regularized_entropy(corr, spec, c=2.0)
    assert got == pytest.approx((2.0 / 6.0) * math.log(lengths), abs=1e-12)


def test_regularized_entropy_arc_length_convention():
    corr = ground_state_correlations(64)
    spec = RegionSpec([(0.3, 1.45)])
    got = regularized_entropy(corr, spec, c=2.0, use_arc_length=True)
    assert got == pytest.approx((2.0 / 6.0) * math.log(1.15), abs=1e-12)


def test_deficit_shrinks_with_size():
    values = {}
    for n in (256, 512, 1024):
        corr = ground_state_correlations(n)
        values[n] = abs(entropy_deficit(corr, TWO_ARCS, c=2.0).deficit)
    assert values[512] < values[256]
    assert values[1024] < values[512]


def test_two_dimensional_deficit_is_additive():
    corr = ground_state_correlations(256)
    left = entropy_deficit(corr, TWO_ARCS, c=2.0)
    right = entropy_deficit(corr, RegionSpec([(0.5, 1.7), (3.0, 4.4)]), c=2.0)
    combined = two_dimensional_deficit(left, right)
    assert combined.deficit == left.deficit + right.deficit
    assert combined.g_region == left.g_region + right.g_region
    assert combined.g_complement == left.g_complement + right.g_complement


def test_two_dimensional_deficit_rejects_mismatched_counts():
    corr = ground_state_correlations(128)
    left = entropy_deficit(corr, TWO_ARCS, c=2.0)
    right = entropy_deficit(corr, RegionSpec([(0.2, 1.1), (2.0, 2.9), (4.1, 5.3)]), c=2.0)
    with pytest.raises(ValueError, match="double-cone"):
        two_dimensional_deficit(left, right)


def test_central_charge_fit_near_unity():
    n = 512
    corr = ground_state_correlations(n)
    circle = LatticeCircle(n)
    lengths = [n // 16, n // 8, 3 * n // 16, n // 4, 3 * n // 8, n // 2]
    entropies = []
    for l in lengths:
        spec = RegionSpec([(0.0, 2.0 * math.pi * l / n - 1e-9)])
        entropies.append(region_entropy(corr, lattice_region(circle, spec)))
    fit = central_charge_fit(lengths, entropies, n)
    assert fit.c_hat == pytest.approx(1.0, abs=0.02)
    assert fit.n_sites == n


def test_central_charge_fit_requires_enough_lengths():
    with pytest.raises(ValueError, match="at least 6"):
        central_charge_fit([8, 16, 24], [0.1, 0.2, 0.3], 64)


def test_central_charge_fit_rejects_degenerate_design():
    with pytest.raises(ValueError, match="degenerate"):
        central_charge_fit([16] * 6, [0.5] * 6, 64)


def test_extrapolation_recovers_synthetic_model():
    sizes = [64, 128, 256, 512]
    points = [(n, 0.25 + 3.0 / n - 7.0 / n**2) for n in sizes]
    out = finite_size_extrapolate(points)
    assert out.value == pytest.approx(0.25, abs=1e-10)
    assert out.coefficients[1] == pytest.approx(3.0, rel=1e-8)
    assert out.coefficients[2] == pytest.approx(-7.0, rel=1e-6)
    assert out.max_residual < 1e-12


def test_extrapolation_input_validation():
    with pytest.raises(ValueError, match="at least 3"):
        finite_size_extrapolate([(64, 0.1), (128, 0.05)])
    with pytest.raises(ValueError, match="strictly increasing"):
        finite_size_extrapolate([(128, 0.1), (64, 0.2), (256, 0.05)])


def test_extrapolated_deficit_is_small():
    points = []
    for n in (256, 512, 1024):
        corr = ground_state_correlations(n)
        points.append((n, entropy_deficit(corr, TWO_ARCS, c=2.0).deficit))
    out = finite_size_extrapolate(points)
    assert abs(out.value) < 5e-3
