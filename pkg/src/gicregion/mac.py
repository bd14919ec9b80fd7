"""Public-message MAC regions at the two receivers and their intersection.

With the private layers treated as noise, the public pair (U1, U2) must lie
inside two pentagon-shaped MAC regions, one per receiver.  This module
computes the eight corner rates, classifies the intersection shape into four
cases, picks the optimum public rate pair for weights mu <= 1, and evaluates
the sum-rate front.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import (
    ChannelParams,
    PowerSplit,
    RegimeError,
    awgn_capacity,
    noise_at_y1,
    noise_at_y2,
)

_DEDUP_TOL = 1e-12


@dataclass(frozen=True)
class MacCorners:
    """Corner rates of the two public-message MACs.

    ``r1_plus_1`` is user 1's public rate at Y1 with the other public message
    removed, ``r1_minus_1`` the same rate with the other public message still
    treated as noise; the trailing digit names the receiver.  ``sum_y1`` and
    ``sum_y2`` are the joint (sum) rates.
    """

    r1_plus_1: float
    r1_minus_1: float
    r1_plus_2: float
    r1_minus_2: float
    r2_plus_2: float
    r2_minus_2: float
    r2_plus_1: float
    r2_minus_1: float
    sum_y1: float
    sum_y2: float

    def as_dict(self) -> dict[str, float]:
        """Serialization keys used by the CLI JSON/CSV schema."""
        return {
            "r1p1": self.r1_plus_1,
            "r1m1": self.r1_minus_1,
            "r1p2": self.r1_plus_2,
            "r1m2": self.r1_minus_2,
            "r2p2": self.r2_plus_2,
            "r2m2": self.r2_minus_2,
            "r2p1": self.r2_plus_1,
            "r2m1": self.r2_minus_1,
            "sum_y1": self.sum_y1,
            "sum_y2": self.sum_y2,
        }


@dataclass(frozen=True)
class MacCase:
    """Which of the four intersection shapes the corner rates produce."""

    case_id: int

    def __post_init__(self) -> None:
        if self.case_id not in (1, 2, 3, 4):
            raise ValueError(f"case_id must be 1..4; got {self.case_id}")

    @property
    def requires_joint_decoding_y1(self) -> bool:
        """Cases 2 and 4 place the optimum on the Y1 sum-rate face, which needs joint decoding."""
        return self.case_id in (2, 4)

    @property
    def name(self) -> str:
        return f"Case{self.case_id}"


@dataclass(frozen=True)
class PublicRatePair:
    """Optimum public pair for mu <= 1 plus the bounds that pin it.

    ``decoding_descriptor`` lists every binding bound:
      - ``successive_y1``: user 2's rate is capped by decoding U2 at Y1 after U1
        (U2 is last-but-one at Y1, before the private layer);
      - ``joint_y1``: the Y1 sum rate binds, so the publics are jointly decoded at Y1;
      - ``successive_y2``: user 2's rate is capped by decoding U2 first at Y2.
    """

    r_u1: float
    r_u2: float
    decoding_descriptor: tuple[str, ...]


@dataclass(frozen=True)
class SumRateFront:
    """Sum-rate front summary: value, binding receiver, and the split that realizes it."""

    r_sum: float
    binding_receiver: str  # "Y1", "Y2" or "Both"
    rho_s: float
    theta_s: float


def corner_rates(params: ChannelParams, split: PowerSplit) -> MacCorners:
    """All eight MAC corner rates and both sum rates for one power split."""
    a, b = params.a, params.b
    pu1 = split.rho * params.p1
    pu2 = split.theta * params.p2
    s1 = noise_at_y1(params, split)
    s2 = noise_at_y2(params, split)
    return MacCorners(
        r1_plus_1=awgn_capacity(pu1, s1),
        r1_minus_1=awgn_capacity(pu1, a * pu2 + s1),
        r1_plus_2=awgn_capacity(b * pu1, s2),
        r1_minus_2=awgn_capacity(b * pu1, pu2 + s2),
        r2_plus_2=awgn_capacity(pu2, s2),
        r2_minus_2=awgn_capacity(pu2, b * pu1 + s2),
        r2_plus_1=awgn_capacity(a * pu2, s1),
        r2_minus_1=awgn_capacity(a * pu2, pu1 + s1),
        sum_y1=awgn_capacity(pu1 + a * pu2, s1),
        sum_y2=awgn_capacity(b * pu1 + pu2, s2),
    )


def classify(corners: MacCorners) -> MacCase:
    """Classify the intersection shape; exact ties resolve to the lower-numbered case."""
    theta_cond = corners.r1_plus_2 > corners.r1_minus_1
    rho_cond = corners.r2_plus_1 > corners.r2_minus_2
    return MacCase(1 + (1 if theta_cond else 0) + (2 if rho_cond else 0))


def threshold_theta(params: ChannelParams) -> float:
    """theta value above which user 1's rate at Y2 overtakes its all-noise rate at Y1.

    Equals (1-b)/p2 - ab + 1; exceeds 1 whenever p2 < t2, in which case the
    overtake branch is infeasible.
    """
    return (1.0 - params.b) / params.p2 - params.a * params.b + 1.0


def threshold_rho(params: ChannelParams) -> float:
    """Mirror of :func:`threshold_theta`: (1-a)/p1 - ab + 1."""
    return (1.0 - params.a) / params.p1 - params.a * params.b + 1.0


def public_rate_pair(params: ChannelParams, split: PowerSplit) -> PublicRatePair:
    """Optimum public pair for mu <= 1: user 1 pinned at its Y2 rate, user 2 at its min bound."""
    c = corner_rates(params, split)
    r_u1 = c.r1_plus_2
    bounds = (
        ("successive_y1", c.r2_plus_1),
        ("joint_y1", c.sum_y1 - r_u1),
        ("successive_y2", c.r2_minus_2),
    )
    r_u2 = min(value for _, value in bounds)
    binding = tuple(name for name, value in bounds if value <= r_u2 + _DEDUP_TOL)
    return PublicRatePair(r_u1=r_u1, r_u2=r_u2, decoding_descriptor=binding)


def intersection_polygon(corners: MacCorners) -> list[tuple[float, float]]:
    """Vertices of the intersection of the two MAC pentagons, counterclockwise.

    Supports the brute-force oracle and plotting; vertices are deduplicated at
    1e-12 and the list starts at the lexicographically smallest vertex.
    """
    constraints = [
        (-1.0, 0.0, 0.0),
        (0.0, -1.0, 0.0),
        (1.0, 0.0, corners.r1_plus_1),
        (1.0, 0.0, corners.r1_plus_2),
        (0.0, 1.0, corners.r2_plus_1),
        (0.0, 1.0, corners.r2_plus_2),
        (1.0, 1.0, corners.sum_y1),
        (1.0, 1.0, corners.sum_y2),
    ]
    vertices: list[tuple[float, float]] = []
    for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(constraints, 2):
        det = a1 * b2 - a2 * b1
        if abs(det) < 1e-14:
            continue
        x = (c1 * b2 - c2 * b1) / det
        y = (a1 * c2 - a2 * c1) / det
        if all(ca * x + cb * y <= cc + _DEDUP_TOL for ca, cb, cc in constraints):
            if not any(
                abs(x - vx) <= _DEDUP_TOL and abs(y - vy) <= _DEDUP_TOL
                for vx, vy in vertices
            ):
                vertices.append((x, y))
    if len(vertices) <= 1:
        return vertices or [(0.0, 0.0)]
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    vertices.sort(key=lambda v: math.atan2(v[1] - cy, v[0] - cx))
    start = min(range(len(vertices)), key=lambda i: vertices[i])
    return vertices[start:] + vertices[:start]


def sum_rate_front(params: ChannelParams) -> SumRateFront:
    """Sum-rate front of the traced boundary family.

    The private layers sit at the thresholds (t1, t2) and contribute
    0.5*log2(1/(ab)); the public layers contribute the smaller of the two MAC
    sum rates.  Requires p1 >= t1 and p2 >= t2.
    """
    t1, t2 = params.t1, params.t2
    if params.p1 < t1 or params.p2 < t2:
        raise RegimeError(
            "sum-rate front requires p1 >= t1 and p2 >= t2 "
            f"(p1={params.p1}, t1={t1}, p2={params.p2}, t2={t2}); "
            "use the degenerate-regime handling in the boundary tracer"
        )
    inv_ab = 1.0 / (params.a * params.b)
    arg_y1 = inv_ab + (params.p1 - t1) + params.a * (params.p2 - t2)
    arg_y2 = inv_ab + (params.p2 - t2) + params.b * (params.p1 - t1)
    lhs = params.p1 * (1.0 - params.b)
    rhs = params.p2 * (1.0 - params.a)
    if lhs < rhs:
        binding = "Y1"
    elif lhs > rhs:
        binding = "Y2"
    else:
        binding = "Both"
    return SumRateFront(
        r_sum=0.5 * math.log2(min(arg_y1, arg_y2)),
        binding_receiver=binding,
        rho_s=max(0.0, 1.0 - t1 / params.p1),
        theta_s=max(0.0, 1.0 - t2 / params.p2),
    )
