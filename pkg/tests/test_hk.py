import math
import random

import numpy as np
import pytest

from gicregion import (
    ChannelParams,
    PowerSplit,
    ValidationError,
    awgn_capacity,
    corner_rates,
    hk_bounds,
    hk_weighted_sum_over_splits,
    lp_optimize_full,
    lp_optimize_reduced,
    public_rate_pair,
    reduced_bounds,
    sum_rate_front,
)
from conftest import random_split, random_valid_params

S_SPLIT = PowerSplit(rho=2.0 / 3.0, theta=0.8125)

# Conditional-variance oracle: each bound is I(S;Y|C) for the scalar model
# Y1 = X1 + sqrt(a) X2 + Z1, Y2 = sqrt(b) X1 + X2 + Z2 with X_i = U_i + V_i.
# The received power of every component is listed per receiver; the bound is
# 0.5*log2(var(Y|C) / var(Y|C,S)) where conditioning removes a component.
_CONSTRAINTS = {
    "HK1": ("Y1", {"U1"}, {"U2", "V1"}),
    "HK2": ("Y2", {"U1"}, {"U2", "V2"}),
    "HK3": ("Y1", {"U2"}, {"U1", "V1"}),
    "HK4": ("Y2", {"U2"}, {"U1", "V2"}),
    "HK5": ("Y1", {"V1"}, {"U1", "U2"}),
    "HK6": ("Y2", {"V2"}, {"U1", "U2"}),
    "HK7": ("Y1", {"U1", "U2"}, {"V1"}),
    "HK8": ("Y2", {"U1", "U2"}, {"V2"}),
    "HK9": ("Y1", {"U1", "V1"}, {"U2"}),
    "HK10": ("Y2", {"U2", "V2"}, {"U1"}),
    "HK11": ("Y1", {"U2", "V1"}, {"U1"}),
    "HK12": ("Y2", {"U1", "V2"}, {"U2"}),
    "HK13": ("Y1", {"U1", "U2", "V1"}, set()),
    "HK14": ("Y2", {"U1", "U2", "V2"}, set()),
}


def _component_powers(params: ChannelParams, split: PowerSplit, receiver: str) -> dict:
    p1hat, p2hat = split.private_powers(params)
    pu1, pu2 = split.rho * params.p1, split.theta * params.p2
    if receiver == "Y1":
        return {"U1": pu1, "V1": p1hat, "U2": params.a * pu2, "V2": params.a * p2hat}
    return {"U1": params.b * pu1, "V1": params.b * p1hat, "U2": pu2, "V2": p2hat}


def conditional_mi_oracle(
    params: ChannelParams, split: PowerSplit, name: str
) -> float:
    receiver, signal, conditioned = _CONSTRAINTS[name]
    powers = _component_powers(params, split, receiver)
    var_given_c = 1.0 + sum(p for comp, p in powers.items() if comp not in conditioned)
    var_given_cs = 1.0 + sum(
        p for comp, p in powers.items() if comp not in conditioned | signal
    )
    return 0.5 * math.log2(var_given_c / var_given_cs)


class TestHkBounds:
    def test_no_public_power(self, e2):
        b = hk_bounds(e2, PowerSplit(rho=0.0, theta=0.0))
        assert b.hk1 == b.hk2 == b.hk3 == b.hk4 == b.hk7 == b.hk8 == 0.0
        assert b.hk5 == pytest.approx(0.5 * math.log2(1 + 30.0 / 9.0), abs=1e-12)

    def test_worked_value_hk2_at_s_split(self, e2):
        b = hk_bounds(e2, S_SPLIT)
        assert b.hk2 == pytest.approx(0.5 * math.log2(13.0 / 5.0), abs=1e-12)

    def test_all_bounds_match_conditional_variance_oracle(self):
        rng = random.Random(53)
        for _ in range(400):
            params = random_valid_params(rng)
            split = random_split(rng)
            bounds = hk_bounds(params, split).as_dict()
            for name, value in bounds.items():
                assert value == pytest.approx(
                    conditional_mi_oracle(params, split, name), abs=1e-10
                ), name

    def test_chain_rule_oracle(self):
        # the joint bound splits as the conditional bound plus the single-message
        # rate with everything else as noise, at both receivers
        rng = random.Random(59)
        for _ in range(1000):
            params = random_valid_params(rng)
            split = random_split(rng)
            b = hk_bounds(params, split)
            pu2 = split.theta * params.p2
            p1hat, p2hat = split.private_powers(params)
            i_u2_y1 = awgn_capacity(
                params.a * pu2, params.p1 + params.a * p2hat + 1.0
            )
            assert b.hk13 == pytest.approx(b.hk9 + i_u2_y1, abs=1e-11)
            pu1 = split.rho * params.p1
            i_u1_y2 = awgn_capacity(
                params.b * pu1, params.p2 + params.b * p1hat + 1.0
            )
            assert b.hk14 == pytest.approx(b.hk10 + i_u1_y2, abs=1e-11)

    def test_nonnegative_and_monotone_in_interference(self):
        rng = random.Random(61)
        for _ in range(500):
            params = random_valid_params(rng)
            split = random_split(rng)
            values = hk_bounds(params, split).as_dict()
            assert all(v >= 0.0 for v in values.values())
        # growing the opposing user's private (interfering) power weakens Y1 bounds
        base = ChannelParams(a=0.3, b=0.6, p1=20.0, p2=30.0)
        lo = hk_bounds(base, PowerSplit(rho=0.5, theta=0.8))
        hi = hk_bounds(base, PowerSplit(rho=0.5, theta=0.4))
        for key in ("hk1", "hk3", "hk5", "hk7"):
            assert getattr(hi, key) <= getattr(lo, key) + 1e-12

    def test_monte_carlo_mi_sanity(self, e2):
        # empirical Gaussian MI from sampled channel outputs, loose tolerance
        rng = np.random.default_rng(7)
        n = 600_000
        split = S_SPLIT
        comps = {
            name: rng.standard_normal(n) * math.sqrt(power)
            for name, power in _component_powers(e2, split, "Y1").items()
            if power > 0
        }
        noise = rng.standard_normal(n)
        bounds = hk_bounds(e2, split)
        for name in ("HK1", "HK5", "HK13"):
            _, signal, conditioned = _CONSTRAINTS[name]
            rest = [
                arr for comp, arr in comps.items() if comp not in conditioned
            ]
            y_given_c = sum(rest) + noise
            y_given_cs = (
                sum(arr for comp, arr in comps.items() if comp not in conditioned | signal)
                + noise
            )
            est = 0.5 * math.log2(np.var(y_given_c) / np.var(y_given_cs))
            assert est == pytest.approx(getattr(bounds, name.lower()), abs=1e-2)


class TestReducedBounds:
    def test_r_u1_equals_corner_rate(self):
        rng = random.Random(67)
        for _ in range(300):
            params = random_valid_params(rng)
            split = random_split(rng)
            sys = reduced_bounds(params, split)
            assert sys.r_u1 == corner_rates(params, split).r1_plus_2

    def test_r_u2_matches_public_rate_pair(self):
        rng = random.Random(71)
        for _ in range(10_000):
            params = random_valid_params(rng)
            split = random_split(rng)
            sys = reduced_bounds(params, split)
            pair = public_rate_pair(params, split)
            assert sys.r_u2_max == pytest.approx(pair.r_u2, abs=1e-12)

    def test_no_public_user1_reduces_to_private_rates(self, e2):
        sys = reduced_bounds(e2, PowerSplit(rho=0.0, theta=0.0))
        assert sys.r_u1 == 0.0
        assert sys.r_v1 == pytest.approx(0.5 * math.log2(1 + 30.0 / 9.0), abs=1e-12)
        assert sys.r_v2 == pytest.approx(0.5 * math.log2(1 + 40.0 / 13.0), abs=1e-12)


class TestLpOptimize:
    def test_private_only_split(self, e2):
        split = PowerSplit(rho=0.0, theta=0.0)
        for mu in (0.25, 0.5, 1.0):
            rates = lp_optimize_full(e2, split, mu)
            expected = 0.5 * math.log2(1 + 30.0 / 9.0) + mu * 0.5 * math.log2(
                1 + 40.0 / 13.0
            )
            assert rates.weighted_sum(mu) == pytest.approx(expected, abs=1e-12)

    def test_full_equals_reduced_on_random_samples(self):
        rng = random.Random(73)
        for _ in range(10_000):
            params = random_valid_params(rng)
            split = random_split(rng)
            mu = rng.uniform(1e-6, 1.0)
            full = lp_optimize_full(params, split, mu).weighted_sum(mu)
            red = lp_optimize_reduced(params, split, mu).weighted_sum(mu)
            assert full == pytest.approx(red, abs=1e-9)

    def test_reduced_value_continuous_as_mu_vanishes(self, e2):
        split = PowerSplit(rho=0.4, theta=0.7)
        tiny = lp_optimize_reduced(e2, split, 1e-12)
        small = lp_optimize_reduced(e2, split, 1e-3)
        assert tiny.r_u2 == small.r_u2

    def test_sum_rate_consistency_on_case4_symmetric_instance(self):
        # at the front split of a symmetric instance whose intersection is
        # Case 4, the mu=1 optimum reproduces the closed-form front value
        params = ChannelParams(a=0.5, b=0.5, p1=40.0, p2=40.0)
        front = sum_rate_front(params)
        split = PowerSplit(rho=front.rho_s, theta=front.theta_s)
        value = lp_optimize_full(params, split, 1.0).weighted_sum(1.0)
        assert value == pytest.approx(front.r_sum, abs=1e-9)

    def test_rejects_nonpositive_mu(self, e2):
        with pytest.raises(ValidationError):
            lp_optimize_full(e2, PowerSplit(rho=0.5, theta=0.5), 0.0)
        with pytest.raises(ValidationError):
            lp_optimize_reduced(e2, PowerSplit(rho=0.5, theta=0.5), -1.0)


class TestWeightedSumOverSplits:
    def test_resolution_two_scans_corners_only(self, e2):
        result = hk_weighted_sum_over_splits(e2, 0.5, 2)
        corners = []
        for rho in (0.0, 1.0):
            for theta in (0.0, 1.0):
                split = PowerSplit(rho=rho, theta=theta)
                corners.append(lp_optimize_reduced(e2, split, 0.5).weighted_sum(0.5))
        assert result.best_value == pytest.approx(max(corners), abs=1e-12)

    def test_small_mu_prefers_corner_a_split(self, e2):
        result = hk_weighted_sum_over_splits(e2, 0.2, 41)
        assert result.best_split == PowerSplit(rho=0.0, theta=1.0)
        pa_value = lp_optimize_reduced(e2, PowerSplit(rho=0.0, theta=1.0), 0.2)
        assert result.best_value == pytest.approx(pa_value.weighted_sum(0.2), abs=1e-12)

    def test_sum_rate_achievable_at_unit_weight(self, e2):
        result = hk_weighted_sum_over_splits(e2, 1.0, 81)
        assert result.best_value >= sum_rate_front(e2).r_sum - 1e-2

    def test_rejects_degenerate_resolution(self, e2):
        with pytest.raises(ValidationError):
            hk_weighted_sum_over_splits(e2, 0.5, 1)


class TestRemark3ActiveConstraints:
    def _count_active(self, params, split, mu):
        rates = lp_optimize_full(params, split, mu)
        b = hk_bounds(params, split)
        tol = 1e-9
        active = 2  # the two private-rate equalities always bind
        x, y = rates.r_u1, rates.r_u2
        for cap in (b.hk1, b.hk2, b.hk9 - rates.r_v1, b.hk12 - rates.r_v2):
            if abs(x - cap) <= tol:
                active += 1
        for cap in (b.hk3, b.hk4, b.hk10 - rates.r_v2, b.hk11 - rates.r_v1):
            if abs(y - cap) <= tol:
                active += 1
        for cap in (b.hk7, b.hk8, b.hk13 - rates.r_v1, b.hk14 - rates.r_v2):
            if abs(x + y - cap) <= tol:
                active += 1
        return active

    def test_at_least_four_active_at_optimal_power(self, e2):
        for mu in (0.5, 1.0):
            best = hk_weighted_sum_over_splits(e2, mu, 101)
            assert self._count_active(e2, best.best_split, mu) >= 4
