"""Independent brute-force and finite-difference validators.

Nothing in this module reuses the closed-form stationary machinery it is
meant to check: the grid oracle sweeps power splits exhaustively, the
finite-difference estimator rebuilds the stationary weight from exact rate
differences, and the scanners sample the corner-rate orderings and the
composite-step additivity directly.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import ChannelParams, PowerSplit, ValidationError
from .hk import reduced_value_grid

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class OracleReport:
    """Result of one exhaustive sweep, with the gap against a reference value.

    ``gap_vs_reference`` is signed: positive means the oracle found a better
    value than the reference it was asked to check.
    """

    best_value: float
    best_split: PowerSplit
    gap_vs_reference: float
    samples: int
    resolution: int
    seed: int


def _worker_count() -> int:
    raw = os.environ.get("GIC_REGION_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"GIC_REGION_THREADS must be an integer; got {raw!r}")
    if n < 0:
        raise ValidationError(f"GIC_REGION_THREADS must be >= 0; got {n}")
    if n == 0:
        return min(8, os.cpu_count() or 1)
    return n


def grid_oracle(
    params: ChannelParams,
    mu: float,
    resolution: int,
    reference_value: float,
) -> OracleReport:
    """Exhaustive uniform sweep of the reduced optimum over the split grid.

    Evaluates ``resolution**2`` splits in row chunks (parallel across the
    worker pool capped by GIC_REGION_THREADS) and reduces deterministically:
    the reported argmax is the best value with the smallest rho, then the
    smallest theta.  The grid is deterministic, so ``seed`` is reported as 0.
    """
    if resolution < 2:
        raise ValidationError(f"resolution must be >= 2; got {resolution}")
    axis = np.linspace(0.0, 1.0, resolution)
    chunk = max(1, min(256, resolution))
    starts = list(range(0, resolution, chunk))

    def eval_rows(start: int) -> tuple[float, float, float]:
        rows = axis[start : start + chunk]
        values = reduced_value_grid(params, mu, rows, axis)
        best = float(values.max())
        ii, jj = np.nonzero(values == best)
        k = np.lexsort((axis[jj], rows[ii]))[0]
        return best, float(rows[ii[k]]), float(axis[jj[k]])

    workers = _worker_count()
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(eval_rows, starts))
    else:
        results = [eval_rows(s) for s in starts]
    best_value, best_rho, best_theta = max(results, key=lambda r: (r[0], -r[1], -r[2]))
    return OracleReport(
        best_value=best_value,
        best_split=PowerSplit(rho=best_rho, theta=best_theta),
        gap_vs_reference=best_value - reference_value,
        samples=resolution * resolution,
        resolution=resolution,
        seed=0,
    )


def finite_difference_mu1(
    params: ChannelParams, p1hat: float, p2hat: float, delta: float
) -> float:
    """Stationary weight of user 1 from exact rate differences at step ``delta``.

    Moves a layer of power ``delta`` for user 1 and forms
    (public dR1 - private dR1) / (private dR2) from the un-linearized log
    expressions; converges to the closed form at first order in delta.
    """
    if delta <= 0.0:
        raise ValidationError(f"delta must be positive; got {delta}")
    if p2hat <= 0.0:
        raise ValidationError(f"p2hat must be positive; got {p2hat}")
    a, b = params.a, params.b
    d_priv = p1hat + a * p2hat + 1.0
    d_pub = b * p1hat + p2hat + 1.0
    n2 = b * p1hat + 1.0
    priv_dr1 = 0.5 * math.log1p(delta / d_priv) / LOG2
    pub_dr1 = 0.5 * math.log1p(b * delta / d_pub) / LOG2
    # exact value of C(p2hat, n2 + b*delta) - C(p2hat, n2), rearranged into a
    # single log1p so the near-cancellation costs no precision
    priv_dr2 = (
        0.5
        * math.log1p(-b * delta * p2hat / ((n2 + b * delta) * (n2 + p2hat)))
        / LOG2
    )
    return (pub_dr1 - priv_dr1) / priv_dr2


def ordering_scan(params: ChannelParams, num_samples: int, seed: int) -> int:
    """Count violations of the unconditional corner-rate orderings on random splits.

    Checks, for every sampled split, that each user's rates dominate at the
    receiver where the message is easiest to hear: the four plus-over-minus
    orderings within each receiver and the four cross-receiver dominances
    (user 1's rates at Y1 over Y2, user 2's at Y2 over Y1).  Ties, which occur
    at degenerate splits, are not violations.  Returns the total number of
    violated (sample, ordering) pairs; a correct implementation returns 0.
    """
    if num_samples < 1:
        raise ValidationError(f"num_samples must be >= 1; got {num_samples}")
    rng = np.random.default_rng(seed)
    rho = rng.random(num_samples)
    theta = rng.random(num_samples)
    a, b = params.a, params.b
    p1hat = (1.0 - rho) * params.p1
    p2hat = (1.0 - theta) * params.p2
    pu1 = rho * params.p1
    pu2 = theta * params.p2
    s1 = p1hat + a * p2hat + 1.0
    s2 = b * p1hat + p2hat + 1.0

    def cap(sig, noise):
        return 0.5 * np.log1p(sig / noise) / LOG2

    r1p1 = cap(pu1, s1)
    r1m1 = cap(pu1, a * pu2 + s1)
    r1p2 = cap(b * pu1, s2)
    r1m2 = cap(b * pu1, pu2 + s2)
    r2p2 = cap(pu2, s2)
    r2m2 = cap(pu2, b * pu1 + s2)
    r2p1 = cap(a * pu2, s1)
    r2m1 = cap(a * pu2, pu1 + s1)
    tol = 1e-12
    orderings = (
        r1p1 - r1m1,
        r1p2 - r1m2,
        r2p2 - r2m2,
        r2p1 - r2m1,
        r1p1 - r1p2,
        r1m1 - r1m2,
        r2p2 - r2p1,
        r2m2 - r2m1,
    )
    return int(sum((diff < -tol).sum() for diff in orderings))


def composite_step_check(
    params: ChannelParams, p1hat: float, p2hat: float, delta: float
) -> float:
    """Gap between a composite step and its two simple sub-steps; O(delta^2).

    ``p1hat``/``p2hat`` are the private powers left after both users moved a
    layer of power ``delta`` to their public parts.  The composite change is
    computed with the public pair at the corner of the infinitesimal MAC
    intersection; the two simple steps move one user at a time, each ignoring
    the other user's fresh public layer.  Returns the L1 difference of the
    per-user rate changes, which shrinks quadratically in delta.
    """
    if delta < 0.0:
        raise ValidationError(f"delta must be non-negative; got {delta}")
    if p1hat < 0.0 or p2hat < 0.0:
        raise ValidationError("private powers must be non-negative")
    a, b = params.a, params.b

    def cap(sig: float, noise: float) -> float:
        return 0.5 * math.log1p(sig / noise) / LOG2

    def pr1(x: float, y: float) -> float:
        return cap(x, a * y + 1.0)

    def pr2(x: float, y: float) -> float:
        return cap(y, b * x + 1.0)

    pub1 = cap(b * delta, b * p1hat + p2hat + 1.0)
    pub2 = cap(a * delta, a * p2hat + p1hat + 1.0)

    dr1_comp = pub1 + pr1(p1hat, p2hat) - pr1(p1hat + delta, p2hat + delta)
    dr2_comp = pub2 + pr2(p1hat, p2hat) - pr2(p1hat + delta, p2hat + delta)

    # step 1: user 1 moves its layer while user 2 still holds p2hat + delta private
    pub1_solo = cap(b * delta, b * p1hat + (p2hat + delta) + 1.0)
    dr1_a = pub1_solo + pr1(p1hat, p2hat + delta) - pr1(p1hat + delta, p2hat + delta)
    dr2_a = pr2(p1hat, p2hat + delta) - pr2(p1hat + delta, p2hat + delta)
    # step 2: user 2 moves its layer; user 1's fresh public layer is ignored
    dr1_b = pr1(p1hat, p2hat) - pr1(p1hat, p2hat + delta)
    dr2_b = pub2 + pr2(p1hat, p2hat) - pr2(p1hat, p2hat + delta)

    return abs(dr1_comp - (dr1_a + dr1_b)) + abs(dr2_comp - (dr2_a + dr2_b))
