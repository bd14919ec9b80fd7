"""Rate-region toolkit for the 2-user weak Gaussian interference channel.

Computes, for fixed power budgets and unit receiver noise: elementary
Gaussian layer rates, the public-message MAC intersection geometry, the
closed-form lower-boundary trace, the full and reduced Han-Kobayashi linear
programs, and independent brute-force validation oracles.
"""

from .boundary import (
    BoundaryPoint,
    DeltaStepGains,
    KeyPoints,
    TraceResult,
    boundary_point_at_mu,
    delta_step_gains,
    key_points,
    mu1_closed,
    mu2_closed,
    mu_at_d3,
    point_a,
    point_d3,
    solve_coupled,
    solve_stationary_p2hat,
    trace_lower_boundary,
    trace_upper_boundary,
)
from .core import (
    ChannelParams,
    GicError,
    NumericError,
    PowerSplit,
    RatePair,
    RegimeError,
    ValidationError,
    awgn_capacity,
    noise_at_y1,
    noise_at_y2,
    private_rate_user1,
    private_rate_user2,
    scsd_layer_rates,
    swap_users,
)
from .hk import (
    HkBounds,
    HkRates,
    ReducedSystem,
    SplitOptimum,
    hk_bounds,
    hk_weighted_sum_over_splits,
    lp_optimize_full,
    lp_optimize_reduced,
    reduced_bounds,
)
from .mac import (
    MacCase,
    MacCorners,
    PublicRatePair,
    SumRateFront,
    classify,
    corner_rates,
    intersection_polygon,
    public_rate_pair,
    sum_rate_front,
    threshold_rho,
    threshold_theta,
)
from .oracle import (
    OracleReport,
    composite_step_check,
    finite_difference_mu1,
    grid_oracle,
    ordering_scan,
)

__version__ = "0.1.0"
