import random

import pytest

from gicregion import ChannelParams, PowerSplit, RegimeError, point_d3

# The worked instance used throughout: a=0.2, b=0.4, p1=30, p2=40,
# thresholds t1=10, t2=7.5, sum-rate front bound by Y1.
E2 = ChannelParams(a=0.2, b=0.4, p1=30.0, p2=40.0)


@pytest.fixture
def e2() -> ChannelParams:
    return E2


def random_valid_params(rng: random.Random) -> ChannelParams:
    """Any weak channel: gains in (0, 1), positive powers."""
    return ChannelParams(
        a=rng.uniform(0.05, 0.95),
        b=rng.uniform(0.05, 0.95),
        p1=rng.uniform(0.2, 120.0),
        p2=rng.uniform(0.2, 120.0),
    )


def random_split(rng: random.Random) -> PowerSplit:
    return PowerSplit(rho=rng.random(), theta=rng.random())


def random_richest_instance(rng: random.Random) -> ChannelParams:
    """Instance with the full lower-part structure.

    Requires p1 > t1, a coupled-segment onset below p2, p2 above that onset,
    the Y1-bound sum-rate front (p1 (1-b) < p2 (1-a)), and ab < 1/2.
    """
    while True:
        a = rng.uniform(0.1, 0.9)
        b = rng.uniform(0.1, 0.9)
        if a * b >= 0.5:
            continue
        t1 = (1.0 - a) / (a * b)
        t2 = (1.0 - b) / (a * b)
        p1 = t1 * rng.uniform(1.5, 5.0)
        probe = ChannelParams(a=a, b=b, p1=p1, p2=t2 * 200.0)
        try:
            d3 = point_d3(probe)
        except RegimeError:
            continue
        if d3 >= t2 * 150.0:
            continue
        p2 = d3 * rng.uniform(1.2, 3.0)
        if p1 * (1.0 - b) >= p2 * (1.0 - a):
            continue
        params = ChannelParams(a=a, b=b, p1=p1, p2=p2)
        try:
            point_d3(params)
        except RegimeError:
            continue
        return params
