"""Han-Kobayashi constraint systems for Gaussian inputs with a fixed power split.

The message set is (U1, V1) for user 1 and (U2, V2) for user 2: U-messages are
public (decoded at both receivers), V-messages private.  With scalar Gaussian
code-books every mutual-information bound is a 0.5*log2(1 + S/N) expression;
the full table of closed forms is spelled out in :func:`hk_bounds`.

The private rates are pinned at their single bounds, which leaves a
2-dimensional linear program in the public rates.  ``lp_optimize_full``
solves it by exhaustive vertex enumeration; ``lp_optimize_reduced`` uses the
closed-form solution of the reduced system.  Their agreement for mu <= 1 is a
checked property, not an assumption.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import (
    ChannelParams,
    NumericError,
    PowerSplit,
    ValidationError,
    awgn_capacity,
)

_FEAS_TOL = 1e-12


@dataclass(frozen=True)
class HkBounds:
    """Right-hand sides of the fourteen expanded constraints.

    Closed forms (n1 = a*p2hat + 1 and n2 = b*p1hat + 1 are the noise floors at
    Y1 and Y2, where the other user's private layer is never decoded):

      HK1  = I(U1;Y1|U2,V1)       = C(rho*p1, n1)
      HK2  = I(U1;Y2|U2,V2)       = C(b*rho*p1, n2)
      HK3  = I(U2;Y1|U1,V1)       = C(a*theta*p2, n1)
      HK4  = I(U2;Y2|U1,V2)       = C(theta*p2, n2)
      HK5  = I(V1;Y1|U1,U2)       = C(p1hat, n1)
      HK6  = I(V2;Y2|U1,U2)       = C(p2hat, n2)
      HK7  = I(U1,U2;Y1|V1)       = C(rho*p1 + a*theta*p2, n1)
      HK8  = I(U1,U2;Y2|V2)       = C(b*rho*p1 + theta*p2, n2)
      HK9  = I(U1,V1;Y1|U2)       = C(p1, n1)
      HK10 = I(U2,V2;Y2|U1)       = C(p2, n2)
      HK11 = I(U2,V1;Y1|U1)       = C(a*theta*p2 + p1hat, n1)
      HK12 = I(U1,V2;Y2|U2)       = C(b*rho*p1 + p2hat, n2)
      HK13 = I(U1,U2,V1;Y1)       = C(p1 + a*theta*p2, n1)
      HK14 = I(U1,U2,V2;Y2)       = C(b*rho*p1 + p2, n2)

    with C(s, n) = 0.5*log2(1 + s/n).  Each equals the log ratio of the
    conditional output variances with and without the decoded set, so every
    entry can be recomputed independently from the scalar channel model.
    """

    hk1: float
    hk2: float
    hk3: float
    hk4: float
    hk5: float
    hk6: float
    hk7: float
    hk8: float
    hk9: float
    hk10: float
    hk11: float
    hk12: float
    hk13: float
    hk14: float

    def as_dict(self) -> dict[str, float]:
        return {f"HK{i}": getattr(self, f"hk{i}") for i in range(1, 15)}


@dataclass(frozen=True)
class HkRates:
    """A rate assignment for the four messages."""

    r_u1: float
    r_u2: float
    r_v1: float
    r_v2: float

    def weighted_sum(self, mu: float) -> float:
        return (self.r_u1 + self.r_v1) + mu * (self.r_u2 + self.r_v2)

    def as_dict(self) -> dict[str, float]:
        return {"rU1": self.r_u1, "rU2": self.r_u2, "rV1": self.r_v1, "rV2": self.r_v2}


@dataclass(frozen=True)
class ReducedSystem:
    """The reduced constraint system: three equalities and a three-way cap on r_u2."""

    r_v1: float
    r_v2: float
    r_u1: float
    r_u2_cap_y1: float  # I(U2;Y1|U1)
    sum_cap_y1: float  # I(U1,U2;Y1)
    sum_cap_y2: float  # I(U1,U2;Y2)

    @property
    def r_u2_max(self) -> float:
        return min(
            self.r_u2_cap_y1,
            self.sum_cap_y1 - self.r_u1,
            self.sum_cap_y2 - self.r_u1,
        )


def hk_bounds(params: ChannelParams, split: PowerSplit) -> HkBounds:
    """All fourteen right-hand sides from the analytic Gaussian closed forms."""
    a, b = params.a, params.b
    p1hat, p2hat = split.private_powers(params)
    pu1 = split.rho * params.p1
    pu2 = split.theta * params.p2
    n1 = a * p2hat + 1.0
    n2 = b * p1hat + 1.0
    return HkBounds(
        hk1=awgn_capacity(pu1, n1),
        hk2=awgn_capacity(b * pu1, n2),
        hk3=awgn_capacity(a * pu2, n1),
        hk4=awgn_capacity(pu2, n2),
        hk5=awgn_capacity(p1hat, n1),
        hk6=awgn_capacity(p2hat, n2),
        hk7=awgn_capacity(pu1 + a * pu2, n1),
        hk8=awgn_capacity(b * pu1 + pu2, n2),
        hk9=awgn_capacity(params.p1, n1),
        hk10=awgn_capacity(params.p2, n2),
        hk11=awgn_capacity(a * pu2 + p1hat, n1),
        hk12=awgn_capacity(b * pu1 + p2hat, n2),
        hk13=awgn_capacity(params.p1 + a * pu2, n1),
        hk14=awgn_capacity(b * pu1 + params.p2, n2),
    )


def reduced_bounds(params: ChannelParams, split: PowerSplit) -> ReducedSystem:
    """Reduced system for mu <= 1 optimum splits.

    The private rates and user 1's public rate are pinned:
    r_v1 = I(V1;Y1|U1,U2), r_v2 = I(V2;Y2|U1,U2), r_u1 = I(U1;Y2|U2);
    user 2's public rate is capped by I(U2;Y1|U1) and the two joint rates.
    """
    a, b = params.a, params.b
    p1hat, p2hat = split.private_powers(params)
    pu1 = split.rho * params.p1
    pu2 = split.theta * params.p2
    s1 = p1hat + a * p2hat + 1.0
    s2 = b * p1hat + p2hat + 1.0
    return ReducedSystem(
        r_v1=awgn_capacity(p1hat, a * p2hat + 1.0),
        r_v2=awgn_capacity(p2hat, b * p1hat + 1.0),
        r_u1=awgn_capacity(b * pu1, s2),
        r_u2_cap_y1=awgn_capacity(a * pu2, s1),
        sum_cap_y1=awgn_capacity(pu1 + a * pu2, s1),
        sum_cap_y2=awgn_capacity(b * pu1 + pu2, s2),
    )


def lp_optimize_full(params: ChannelParams, split: PowerSplit, mu: float) -> HkRates:
    """Maximize r1 + mu*r2 over the full fourteen-constraint system.

    The private rates satisfy their bounds with equality, which reduces the
    problem to the (r_u1, r_u2) plane; the optimum is found by enumerating
    every pairwise intersection of active constraint lines and keeping the
    best feasible point.  Ties prefer larger r_u1, then larger r_u2.
    """
    if mu <= 0.0:
        raise ValidationError(f"mu must be positive; got {mu}")
    hkb = hk_bounds(params, split)
    r_v1 = hkb.hk5
    r_v2 = hkb.hk6
    x_caps = (hkb.hk1, hkb.hk2, hkb.hk9 - r_v1, hkb.hk12 - r_v2)
    y_caps = (hkb.hk3, hkb.hk4, hkb.hk10 - r_v2, hkb.hk11 - r_v1)
    s_caps = (hkb.hk7, hkb.hk8, hkb.hk13 - r_v1, hkb.hk14 - r_v2)

    lines: list[tuple[float, float, float]] = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0)]
    lines += [(1.0, 0.0, c) for c in x_caps]
    lines += [(0.0, 1.0, c) for c in y_caps]
    lines += [(1.0, 1.0, c) for c in s_caps]

    def feasible(x: float, y: float) -> bool:
        if x < -_FEAS_TOL or y < -_FEAS_TOL:
            return False
        if any(x > c + _FEAS_TOL for c in x_caps):
            return False
        if any(y > c + _FEAS_TOL for c in y_caps):
            return False
        return all(x + y <= c + _FEAS_TOL for c in s_caps)

    best: tuple[float, float, float] | None = None
    for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(lines, 2):
        det = a1 * b2 - a2 * b1
        if abs(det) < 1e-14:
            continue
        x = (c1 * b2 - c2 * b1) / det
        y = (a1 * c2 - a2 * c1) / det
        if not feasible(x, y):
            continue
        cand = (x + mu * y, x, y)
        if best is None or cand > best:
            best = cand
    if best is None:
        raise NumericError("full HK system produced no feasible vertex")
    return HkRates(r_u1=max(0.0, best[1]), r_u2=max(0.0, best[2]), r_v1=r_v1, r_v2=r_v2)


def lp_optimize_reduced(params: ChannelParams, split: PowerSplit, mu: float) -> HkRates:
    """Closed-form optimum of the reduced system.

    r_u1 is pinned and any mu > 0 makes the r_u2 cap tight, so the optimum is
    immediate; the value is continuous as mu -> 0+.
    """
    if mu <= 0.0:
        raise ValidationError(f"mu must be positive; got {mu}")
    sys = reduced_bounds(params, split)
    return HkRates(
        r_u1=sys.r_u1,
        r_u2=max(0.0, sys.r_u2_max),
        r_v1=sys.r_v1,
        r_v2=sys.r_v2,
    )


def reduced_value_grid(
    params: ChannelParams,
    mu: float,
    rhos: np.ndarray,
    thetas: np.ndarray,
) -> np.ndarray:
    """Weighted-sum values of the reduced optimum on the rho x theta grid.

    Vectorized over a meshgrid; returns an array of shape (len(rhos), len(thetas)).
    """
    a, b = params.a, params.b
    rho = np.asarray(rhos, dtype=float)[:, None]
    theta = np.asarray(thetas, dtype=float)[None, :]
    p1hat = (1.0 - rho) * params.p1
    p2hat = (1.0 - theta) * params.p2
    pu1 = rho * params.p1
    pu2 = theta * params.p2
    s1 = p1hat + a * p2hat + 1.0
    s2 = b * p1hat + p2hat + 1.0

    def cap(sig, noise):
        return 0.5 * np.log1p(sig / noise) / np.log(2.0)

    r_v1 = cap(p1hat, a * p2hat + 1.0)
    r_v2 = cap(p2hat, b * p1hat + 1.0)
    r_u1 = cap(b * pu1, s2)
    r_u2 = np.minimum(
        cap(a * pu2, s1),
        np.minimum(cap(pu1 + a * pu2, s1) - r_u1, cap(b * pu1 + pu2, s2) - r_u1),
    )
    r_u2 = np.maximum(r_u2, 0.0)
    return (r_u1 + r_v1) + mu * (r_u2 + r_v2)


@dataclass(frozen=True)
class SplitOptimum:
    best_value: float
    best_split: PowerSplit


def hk_weighted_sum_over_splits(
    params: ChannelParams, mu: float, grid_resolution: int
) -> SplitOptimum:
    """Maximize the reduced optimum over a uniform split grid.

    Ties prefer the smallest rho, then the smallest theta, so results do not
    depend on evaluation order.
    """
    if grid_resolution < 2:
        raise ValidationError(f"grid_resolution must be >= 2; got {grid_resolution}")
    if mu <= 0.0:
        raise ValidationError(f"mu must be positive; got {mu}")
    axis = np.linspace(0.0, 1.0, grid_resolution)
    values = reduced_value_grid(params, mu, axis, axis)
    best = float(values.max())
    ii, jj = np.nonzero(values == best)
    k = np.lexsort((axis[jj], axis[ii]))[0]
    return SplitOptimum(
        best_value=best,
        best_split=PowerSplit(rho=float(axis[ii[k]]), theta=float(axis[jj[k]])),
    )
