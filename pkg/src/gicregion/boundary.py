"""Tracing the lower part of the rate-region boundary for a fixed strategy.

The trace starts at the corner maximizing r1 (point A), follows the
closed-form stationary condition of user 2 while user 1 stays fully private,
switches at point D3 to the coupled curve where both stationary weights agree,
and ends on the sum-rate front at point S.  The upper part is obtained by the
user-exchange transform.

All root finding is plain bisection: the stationary weights are strictly
monotone in each private power, so brackets are guaranteed.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .core import (
    ChannelParams,
    NumericError,
    PowerSplit,
    RegimeError,
    ValidationError,
    awgn_capacity,
    private_rate_user1,
    private_rate_user2,
    swap_users,
)
from .mac import SumRateFront, classify, corner_rates, public_rate_pair, sum_rate_front

_RESIDUAL_TOL = 1e-12
_MAX_BISECT_ITER = 200

REGIME_RICHEST = "richest"
REGIME_FRONT_COINCIDENT = "front-coincident-p1-at-t1"
REGIME_NO_COUPLED = "no-coupled-segment"


@dataclass(frozen=True)
class BoundaryPoint:
    """One traced point: weight tag, power split, rates, and segment label."""

    mu: float
    rho: float
    theta: float
    p1hat: float
    p2hat: float
    r1: float
    r2: float
    regime: str  # CornerA | StationaryUser2 | Coupled | SumRateFront
    mac_case: str


@dataclass(frozen=True)
class KeyPoints:
    """Named waypoints of the lower-part traversal."""

    point_a: BoundaryPoint
    mu_at_a: float
    d2_p2hat: float  # private power of user 2 where the user-1 weight first equals 1
    d3_p2hat: float  # private power of user 2 at the onset of the coupled segment
    s_split: PowerSplit


@dataclass(frozen=True)
class DeltaStepGains:
    """Linearized rate changes per unit of user-1 power moved between layers.

    All three coefficients drop the common 1/(2 ln 2) scale.
    ``private_r2_loss`` is signed (negative): growing user 1's private power
    degrades user 2's private layer.
    """

    private_r1_gain: float
    private_r2_loss: float
    public_r1_gain: float


@dataclass(frozen=True)
class TraceResult:
    """Ordered boundary polyline plus the regime report used by the CLI."""

    points: tuple[BoundaryPoint, ...]
    regime: str
    clipped: bool

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, idx):
        return self.points[idx]


def mu1_closed(params: ChannelParams, p1hat: float, p2hat: float) -> float:
    """Stationary weight of user 1's private/public split, in closed form.

    mu1 = (b p1hat + 1)(p2hat (1 - ab) + 1 - b) / (b p2hat (p1hat + a p2hat + 1)).
    Strictly decreasing in p2hat, strictly increasing in p1hat for p2hat > t2,
    and identically 1 at p2hat = t2.  Diverges as p2hat -> 0.
    """
    if p1hat < 0.0 or p2hat < 0.0:
        raise ValidationError("private powers must be non-negative")
    if p2hat == 0.0:
        return math.inf
    a, b = params.a, params.b
    num = (b * p1hat + 1.0) * (p2hat * (1.0 - a * b) + 1.0 - b)
    den = b * p2hat * (p1hat + a * p2hat + 1.0)
    return num / den


def mu2_closed(params: ChannelParams, p1hat: float, p2hat: float) -> float:
    """User-exchange mirror of :func:`mu1_closed`; diverges as p1hat -> 0."""
    if p1hat < 0.0 or p2hat < 0.0:
        raise ValidationError("private powers must be non-negative")
    if p1hat == 0.0:
        return math.inf
    a, b = params.a, params.b
    num = (a * p2hat + 1.0) * (p1hat * (1.0 - a * b) + 1.0 - a)
    den = a * p1hat * (p2hat + b * p1hat + 1.0)
    return num / den


def delta_step_gains(params: ChannelParams, p1hat: float, p2hat: float) -> DeltaStepGains:
    """First-order rate coefficients for moving user-1 power private <-> public.

    At mu1 = mu1_closed the stationarity identity holds:
    private_r1_gain + mu1 * private_r2_loss = public_r1_gain.
    """
    if p1hat < 0.0 or p2hat < 0.0:
        raise ValidationError("private powers must be non-negative")
    a, b = params.a, params.b
    return DeltaStepGains(
        private_r1_gain=1.0 / (p1hat + a * p2hat + 1.0),
        private_r2_loss=b / (b * p1hat + p2hat + 1.0) - b / (b * p1hat + 1.0),
        public_r1_gain=b / (b * p1hat + p2hat + 1.0),
    )


def _bisect(func, lo: float, hi: float, *, residual_tol: float = _RESIDUAL_TOL,
            what: str = "bisection") -> float:
    """Bisection for a root of ``func`` with func(lo) and func(hi) of opposite sign.

    Stops when the residual drops below ``residual_tol`` or the interval
    reaches floating-point resolution; raises NumericError past the iteration cap.
    """
    flo = func(lo)
    if abs(flo) <= residual_tol:
        return lo
    fhi = func(hi)
    if abs(fhi) <= residual_tol:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NumericError(
            f"{what}: no sign change on [{lo}, {hi}] (f(lo)={flo}, f(hi)={fhi})"
        )
    mid = lo
    for _ in range(_MAX_BISECT_ITER):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:  # interval at float resolution
            return mid
        fmid = func(mid)
        if abs(fmid) <= residual_tol:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    fmid = func(mid)
    if abs(fmid) <= max(residual_tol, 1e-9):
        return mid
    raise NumericError(
        f"{what}: no convergence after {_MAX_BISECT_ITER} iterations "
        f"(bracket [{lo}, {hi}], residual {fmid})"
    )


def solve_stationary_p2hat(params: ChannelParams, mu: float) -> float:
    """Invert the user-2 stationary weight at full user-1 private power.

    mu2_closed(p1, .) is strictly increasing, so the root on [0, p2] is unique.
    Raises ValidationError when ``mu`` falls outside the attainable interval.
    """
    lo_mu = mu2_closed(params, params.p1, 0.0)
    hi_mu = mu2_closed(params, params.p1, params.p2)
    if not (lo_mu - 1e-12 <= mu <= hi_mu + 1e-12):
        raise ValidationError(
            f"mu={mu} outside the attainable stationary range [{lo_mu}, {hi_mu}]"
        )
    mu_c = min(max(mu, lo_mu), hi_mu)
    return _bisect(
        lambda y: mu2_closed(params, params.p1, y) - mu_c,
        0.0,
        params.p2,
        what="solve_stationary_p2hat",
    )


@functools.lru_cache(maxsize=256)
def point_d3(params: ChannelParams) -> float:
    """Private power of user 2 where the two stationary weights meet (user 1 fully private).

    Solves mu1(p1, x) = mu2(p1, x) on (t2, p2]; mu1 decreases and mu2
    increases in x, so the crossing is unique when it exists.  Raises
    RegimeError when the boundary meets the sum-rate front before the
    coupled segment can form.
    """
    t2 = params.t2
    if params.p1 <= params.t1 or params.p2 <= t2:
        raise RegimeError(
            f"coupled segment needs p1 > t1 and p2 > t2 "
            f"(p1={params.p1}, t1={params.t1}, p2={params.p2}, t2={t2})"
        )

    def gap(x: float) -> float:
        return mu1_closed(params, params.p1, x) - mu2_closed(params, params.p1, x)

    lo = t2 * (1.0 + 1e-14)
    if gap(params.p2) > 0.0:
        raise RegimeError(
            "mu1 stays above mu2 for every admissible private power of user 2; "
            "the boundary reaches the sum-rate front before point D3"
        )
    return _bisect(gap, lo, params.p2, what="point_d3")


def mu_at_d3(params: ChannelParams) -> float:
    """Common stationary weight at point D3."""
    return mu1_closed(params, params.p1, point_d3(params))


def solve_coupled(params: ChannelParams, mu: float) -> tuple[float, float]:
    """Private-power pair with mu1 = mu2 = mu, for mu between the D3 weight and 1.

    Nested bisection: the inner solve inverts mu1 in p2hat (strictly
    decreasing), the outer solve drives mu2 to ``mu`` in p1hat (the outer
    residual decreases from 1 - mu at p1hat = t1 to a negative value at
    p1hat = p1).
    """
    mu_d3 = mu_at_d3(params)
    if not (mu_d3 - 1e-9 <= mu <= 1.0 + 1e-12):
        raise ValidationError(f"mu={mu} outside the coupled range [{mu_d3}, 1]")
    mu_c = min(mu, 1.0)
    t1 = params.t1
    y_floor = min(1e-12, params.t2 * 1e-9)

    def inner(x: float) -> float:
        return _bisect(
            lambda y: mu1_closed(params, x, y) - mu_c,
            y_floor,
            params.p2,
            residual_tol=1e-13,
            what="solve_coupled inner",
        )

    def outer(x: float) -> float:
        return mu2_closed(params, x, inner(x)) - mu_c

    p1hat = _bisect(outer, t1, params.p1, residual_tol=1e-12, what="solve_coupled outer")
    p2hat = inner(p1hat)
    res1 = mu1_closed(params, p1hat, p2hat) - mu_c
    res2 = mu2_closed(params, p1hat, p2hat) - mu_c
    if abs(res1) > 1e-10 or abs(res2) > 1e-10:
        raise NumericError(
            f"coupled solve residuals too large: mu1 err={res1}, mu2 err={res2} "
            f"at (p1hat={p1hat}, p2hat={p2hat}, mu={mu})"
        )
    return p1hat, p2hat


def _assemble(params: ChannelParams, split: PowerSplit, mu: float, regime: str) -> BoundaryPoint:
    """Build a BoundaryPoint: public pair from the MAC intersection plus private rates."""
    p1hat, p2hat = split.private_powers(params)
    pub = public_rate_pair(params, split)
    case = classify(corner_rates(params, split))
    return BoundaryPoint(
        mu=mu,
        rho=split.rho,
        theta=split.theta,
        p1hat=p1hat,
        p2hat=p2hat,
        r1=pub.r_u1 + private_rate_user1(params, p1hat, p2hat),
        r2=pub.r_u2 + private_rate_user2(params, p1hat, p2hat),
        regime=regime,
        mac_case=case.name,
    )


def point_a(params: ChannelParams) -> BoundaryPoint:
    """Corner maximizing r1: user 1 fully private, user 2 fully public.

    r1 = 0.5*log2(1 + p1); r2 is capped by decoding user 2's message at Y1
    against user 1's full power: 0.5*log2(1 + a p2 / (p1 + 1)).
    """
    split = PowerSplit(rho=0.0, theta=1.0)
    point = _assemble(params, split, mu2_closed(params, params.p1, 0.0), "CornerA")
    # cross-check against the closed forms; the assembled path must agree exactly
    assert abs(point.r1 - awgn_capacity(params.p1, 1.0)) < 1e-12
    assert abs(point.r2 - awgn_capacity(params.a * params.p2, params.p1 + 1.0)) < 1e-12
    return point


def key_points(params: ChannelParams) -> KeyPoints:
    """Waypoints A, D2, D3 and the point-S split for the richest-structure regime."""
    d3 = point_d3(params)
    front = sum_rate_front(params)
    return KeyPoints(
        point_a=point_a(params),
        mu_at_a=mu2_closed(params, params.p1, 0.0),
        d2_p2hat=params.t2,
        d3_p2hat=d3,
        s_split=PowerSplit(rho=front.rho_s, theta=front.theta_s),
    )


def boundary_point_at_mu(params: ChannelParams, mu: float) -> BoundaryPoint:
    """The traced point for one weight: corner A below its departure weight,
    then the stationary segment, then the coupled segment up to mu = 1."""
    if not (0.0 < mu <= 1.0):
        raise ValidationError(f"mu must lie in (0, 1]; got {mu}")
    if params.p1 <= params.t1 or params.p2 <= params.t2:
        raise RegimeError(
            "per-mu lookup requires p1 > t1 and p2 > t2; "
            "degenerate regimes are handled by trace_lower_boundary"
        )
    mu_a = mu2_closed(params, params.p1, 0.0)
    if mu <= mu_a:
        pt = point_a(params)
        return BoundaryPoint(
            mu=mu, rho=pt.rho, theta=pt.theta, p1hat=pt.p1hat, p2hat=pt.p2hat,
            r1=pt.r1, r2=pt.r2, regime=pt.regime, mac_case=pt.mac_case,
        )
    try:
        mu_d3 = mu_at_d3(params)
    except RegimeError:
        mu_d3 = math.inf
    if mu <= mu_d3:
        mu_top = mu2_closed(params, params.p1, params.p2)
        if mu > mu_top:
            raise RegimeError(
                f"mu={mu} exceeds the attainable stationary weight {mu_top} "
                "and no coupled segment exists for these parameters"
            )
        p2hat = solve_stationary_p2hat(params, mu)
        split = PowerSplit.from_private_powers(params, params.p1, p2hat)
        return _assemble(params, split, mu, "StationaryUser2")
    p1hat, p2hat = solve_coupled(params, mu)
    split = PowerSplit.from_private_powers(params, p1hat, p2hat)
    return _assemble(params, split, mu, "Coupled")


def _geometric_mu_grid(mu_lo: float, count: int) -> list[float]:
    """``count`` weights on (mu_lo, 1], geometrically clustered near 1, ending at 1."""
    if count <= 0:
        return []
    if count == 1:
        return [1.0]
    span = 1.0 - mu_lo
    ratio = (1e-6) ** (1.0 / (count - 1))
    grid = [1.0 - span * ratio**i for i in range(1, count)]
    grid.append(1.0)
    return grid


def _front_sweep_range(params: ChannelParams, front: SumRateFront) -> tuple[float, float] | None:
    """Public-rate interval of the binding sum-rate face inside the MAC intersection.

    Returns (x_lo, x_hi) for user 1's public rate, or None when the face lies
    outside the intersection (the optimum pair then sits strictly below the
    binding sum rate and there is nothing to sweep).
    """
    split = PowerSplit(rho=front.rho_s, theta=front.theta_s)
    c = corner_rates(params, split)
    pub = public_rate_pair(params, split)
    s_bind = min(c.sum_y1, c.sum_y2)
    if pub.r_u1 + pub.r_u2 < s_bind - 1e-12:
        return None
    x_hi = pub.r_u1
    x_lo = max(0.0, s_bind - c.r2_plus_1, s_bind - c.r2_plus_2)
    if x_lo >= x_hi - 1e-15:
        return None
    return x_lo, x_hi


def trace_lower_boundary(params: ChannelParams, num_points: int) -> TraceResult:
    """Trace the lower part from point A to the end of the sum-rate front.

    ``num_points`` sets the grid budget from A through S; the exact weights
    mu(A), mu(D3) and 1 are always grid points, so the emitted polyline can
    exceed ``num_points`` by one or two rows.  Degenerate regimes:

      - p1 == t1: the whole lower part coincides with the sum-rate front and
        is swept in theta;
      - p1 < t1 or p2 < t2: RegimeError (no lower-part structure to trace);
      - no D3 crossing: stationary segment only, clipped at the front;
      - a traced point reaching the front sum before mu = 1 clips the trace.
    """
    if num_points < 2:
        raise ValidationError(f"num_points must be >= 2; got {num_points}")
    t1, t2 = params.t1, params.t2
    if params.p1 == t1:
        return _trace_front_coincident(params, num_points)
    if params.p1 < t1 or params.p2 < t2:
        raise RegimeError(
            "lower-part trace requires p1 >= t1 and p2 > t2; "
            f"got p1={params.p1} (t1={t1}), p2={params.p2} (t2={t2})"
        )
    if params.p2 == t2:
        raise RegimeError(
            "p2 == t2 leaves no room for the user-2 stationary segment; "
            "the lower part ends at the corner point"
        )

    front = sum_rate_front(params)
    mu_a = mu2_closed(params, params.p1, 0.0)
    try:
        mu_d3 = mu_at_d3(params)
        regime = REGIME_RICHEST
    except RegimeError:
        mu_d3 = None
        regime = REGIME_NO_COUPLED

    sweep = _front_sweep_range(params, front) if regime == REGIME_RICHEST else None
    budget = num_points - 2
    n_sweep = budget // 4 if sweep is not None else 0
    n_mu = budget - n_sweep

    points: list[BoundaryPoint] = []
    clipped = False

    def push(point: BoundaryPoint) -> bool:
        """Append a point; True means the front was crossed and the trace stops.

        The corner point itself sits exactly on the Y1-branch front value, so
        only a strict excess beyond float noise counts as a crossing.
        """
        nonlocal clipped
        points.append(point)
        if point.mu < 1.0 and point.r1 + point.r2 > front.r_sum + 1e-9:
            clipped = True
        return clipped

    push(point_a(params))
    if clipped:
        return TraceResult(
            points=tuple(points), regime=regime + "+clipped-at-front", clipped=True
        )

    if regime == REGIME_RICHEST:
        span_st = mu_d3 - mu_a
        span_co = 1.0 - mu_d3
        total = span_st + span_co
        n_st = int(round(n_mu * (span_st / total))) if total > 0 else 0
        n_co = max(1, n_mu - n_st)
        stationary_mus: list[float] = []
        if budget >= 1:
            step = span_st / (n_st + 1)
            stationary_mus = [mu_a + step * k for k in range(1, n_st + 1)] + [mu_d3]
        for mu in stationary_mus:
            p2hat = solve_stationary_p2hat(params, mu)
            split = PowerSplit.from_private_powers(params, params.p1, p2hat)
            if push(_assemble(params, split, mu, "StationaryUser2")):
                break
        if not clipped:
            for mu in _geometric_mu_grid(mu_d3, n_co):
                p1hat, p2hat = solve_coupled(params, mu)
                split = PowerSplit.from_private_powers(params, p1hat, p2hat)
                if push(_assemble(params, split, mu, "Coupled")):
                    break
    else:
        mu_top = mu2_closed(params, params.p1, params.p2)
        n_st = max(1, n_mu)
        step = (mu_top - mu_a) / n_st
        for k in range(1, n_st + 1):
            mu = mu_a + step * k
            p2hat = solve_stationary_p2hat(params, mu)
            split = PowerSplit.from_private_powers(params, params.p1, p2hat)
            if push(_assemble(params, split, mu, "StationaryUser2")):
                break

    if not clipped and sweep is not None and n_sweep > 0:
        x_lo, x_hi = sweep
        split = PowerSplit(rho=front.rho_s, theta=front.theta_s)
        c = corner_rates(params, split)
        s_bind = min(c.sum_y1, c.sum_y2)
        pr1 = private_rate_user1(params, t1, t2)
        pr2 = private_rate_user2(params, t1, t2)
        case = classify(c).name
        for k in range(1, n_sweep + 1):
            x = x_hi + (x_lo - x_hi) * k / n_sweep
            points.append(
                BoundaryPoint(
                    mu=1.0,
                    rho=split.rho,
                    theta=split.theta,
                    p1hat=t1,
                    p2hat=t2,
                    r1=x + pr1,
                    r2=(s_bind - x) + pr2,
                    regime="SumRateFront",
                    mac_case=case,
                )
            )
    if clipped:
        regime = regime + "+clipped-at-front"
    return TraceResult(points=tuple(points), regime=regime, clipped=clipped)


def _trace_front_coincident(params: ChannelParams, num_points: int) -> TraceResult:
    """Degenerate p1 == t1 case: every theta split sits on the sum-rate front."""
    points = []
    for k in range(num_points):
        theta = 1.0 - k / (num_points - 1)
        split = PowerSplit(rho=0.0, theta=theta)
        points.append(_assemble(params, split, 1.0, "SumRateFront"))
    return TraceResult(points=tuple(points), regime=REGIME_FRONT_COINCIDENT, clipped=False)


def trace_upper_boundary(params: ChannelParams, num_points: int) -> TraceResult:
    """Upper part via the user-exchange transform of the swapped channel.

    Points are reported in counterclockwise order (r2 increasing) with
    mu mapped to 1/mu of the swapped trace, so upper weights are >= 1.
    """
    mirrored = trace_lower_boundary(swap_users(params), num_points)
    points = []
    for pt in reversed(mirrored.points):
        split = PowerSplit(rho=pt.theta, theta=pt.rho)
        case = classify(corner_rates(params, split))
        points.append(
            BoundaryPoint(
                mu=math.inf if pt.mu == 0.0 else 1.0 / pt.mu,
                rho=pt.theta,
                theta=pt.rho,
                p1hat=pt.p2hat,
                p2hat=pt.p1hat,
                r1=pt.r2,
                r2=pt.r1,
                regime=pt.regime,
                mac_case=case.name,
            )
        )
    return TraceResult(points=tuple(points), regime=mirrored.regime, clipped=mirrored.clipped)
