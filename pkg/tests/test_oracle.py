import math
import random

import pytest

from gicregion import (
    ChannelParams,
    PowerSplit,
    ValidationError,
    boundary_point_at_mu,
    composite_step_check,
    finite_difference_mu1,
    grid_oracle,
    lp_optimize_reduced,
    mu1_closed,
    ordering_scan,
)
from conftest import random_valid_params


class TestGridOracle:
    def test_resolution_two_covers_unit_corners(self, e2):
        report = grid_oracle(e2, 0.5, 2, reference_value=0.0)
        values = {}
        for rho in (0.0, 1.0):
            for theta in (0.0, 1.0):
                split = PowerSplit(rho=rho, theta=theta)
                values[(rho, theta)] = lp_optimize_reduced(e2, split, 0.5).weighted_sum(0.5)
        assert report.best_value == pytest.approx(max(values.values()), abs=1e-12)
        assert report.samples == 4
        assert report.seed == 0

    def test_matches_scalar_reduced_lp(self, e2):
        report = grid_oracle(e2, 0.7, 41, reference_value=0.0)
        split = report.best_split
        direct = lp_optimize_reduced(e2, split, 0.7).weighted_sum(0.7)
        assert report.best_value == pytest.approx(direct, abs=1e-12)

    def test_gap_sign_convention(self, e2):
        report = grid_oracle(e2, 0.5, 41, reference_value=1.0)
        assert report.gap_vs_reference == pytest.approx(report.best_value - 1.0, abs=1e-15)

    def test_nested_refinement_never_decreases(self, e2):
        # resolutions n and 2n-1 share grid points, so the max cannot drop
        coarse = grid_oracle(e2, 0.9, 41, reference_value=0.0)
        fine = grid_oracle(e2, 0.9, 81, reference_value=0.0)
        assert fine.best_value >= coarse.best_value - 1e-15

    def test_deterministic(self, e2):
        a = grid_oracle(e2, 0.3, 101, reference_value=0.0)
        b = grid_oracle(e2, 0.3, 101, reference_value=0.0)
        assert a == b

    def test_small_mu_argmax_is_corner_a_split(self, e2):
        point = boundary_point_at_mu(e2, 0.2)
        reference = point.r1 + 0.2 * point.r2
        report = grid_oracle(e2, 0.2, 101, reference_value=reference)
        assert report.best_split == PowerSplit(rho=0.0, theta=1.0)
        # below the corner departure weight the corner itself is grid-optimal
        assert abs(report.gap_vs_reference) <= 1e-9

    def test_rejects_degenerate_resolution(self, e2):
        with pytest.raises(ValidationError):
            grid_oracle(e2, 0.5, 1, reference_value=0.0)


class TestFiniteDifferenceMu1:
    def test_worked_point(self, e2):
        est = finite_difference_mu1(e2, 30.0, 10.0, 1e-6)
        assert est == pytest.approx(0.9651515151515151, abs=1e-4)

    def test_error_shrinks_linearly(self, e2):
        exact = mu1_closed(e2, 30.0, 10.0)
        errors = [
            abs(finite_difference_mu1(e2, 30.0, 10.0, d) - exact)
            for d in (1e-3, 1e-4, 1e-5)
        ]
        assert errors[0] > errors[1] > errors[2]
        assert errors[0] / errors[1] == pytest.approx(10.0, rel=0.2)
        assert errors[1] / errors[2] == pytest.approx(10.0, rel=0.2)

    def test_threshold_point_estimates_unity(self, e2):
        est = finite_difference_mu1(e2, 10.0, 7.5, 1e-6)
        assert est == pytest.approx(1.0, abs=1e-4)

    def test_agreement_over_random_points(self):
        rng = random.Random(79)
        for _ in range(2000):
            params = random_valid_params(rng)
            p1hat = rng.uniform(0.0, params.p1)
            p2hat = rng.uniform(0.01 * params.p2, params.p2)
            est = finite_difference_mu1(params, p1hat, p2hat, 1e-6)
            assert est == pytest.approx(mu1_closed(params, p1hat, p2hat), abs=1e-4)

    def test_rejects_bad_arguments(self, e2):
        with pytest.raises(ValidationError):
            finite_difference_mu1(e2, 10.0, 5.0, 0.0)
        with pytest.raises(ValidationError):
            finite_difference_mu1(e2, 10.0, 0.0, 1e-6)


class TestOrderingScan:
    def test_zero_violations_large_sample(self, e2):
        assert ordering_scan(e2, 100_000, seed=1) == 0

    def test_zero_violations_across_instances(self):
        rng = random.Random(83)
        for _ in range(10):
            params = random_valid_params(rng)
            assert ordering_scan(params, 20_000, seed=rng.randrange(2**31)) == 0

    def test_seed_determinism(self, e2):
        assert ordering_scan(e2, 5000, seed=7) == ordering_scan(e2, 5000, seed=7)

    def test_rejects_empty_sample(self, e2):
        with pytest.raises(ValidationError):
            ordering_scan(e2, 0, seed=1)


class TestCompositeStepCheck:
    def test_zero_delta_zero_deviation(self, e2):
        assert composite_step_check(e2, 12.0, 9.0, 0.0) == 0.0

    def test_quadratic_order(self, e2):
        d1 = composite_step_check(e2, 12.0, 9.0, 2e-4)
        d2 = composite_step_check(e2, 12.0, 9.0, 1e-4)
        d3 = composite_step_check(e2, 12.0, 9.0, 5e-5)
        assert d1 / d2 == pytest.approx(4.0, rel=0.3)
        assert d2 / d3 == pytest.approx(4.0, rel=0.3)

    def test_bounded_by_quadratic_envelope(self, e2):
        delta = 1e-4
        dev = composite_step_check(e2, 12.0, 9.0, delta)
        # the leading constant estimated from a delta sweep
        const = composite_step_check(e2, 12.0, 9.0, 2e-4) / (2e-4) ** 2
        assert dev <= 1.5 * const * delta**2

    def test_random_points_quadratic(self):
        rng = random.Random(89)
        for _ in range(50):
            params = random_valid_params(rng)
            x = rng.uniform(0.1, params.p1 * 0.9)
            y = rng.uniform(0.1, params.p2 * 0.9)
            d1 = composite_step_check(params, x, y, 1e-4)
            d2 = composite_step_check(params, x, y, 5e-5)
            if d1 > 1e-15 and d2 > 1e-15:
                assert d1 / d2 == pytest.approx(4.0, rel=0.35)
