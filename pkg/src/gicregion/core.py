"""Channel parameterization and elementary Gaussian rate formulas.

Everything here is a pure function of its inputs; the dataclasses are frozen
and safe to share across threads.  Rates are in bits per channel use
(log base 2), powers are linear, and the additive noise at both receivers
has unit power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LOG2 = math.log(2.0)


class GicError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(GicError):
    """An argument or configuration value is outside its admissible domain."""


class RegimeError(GicError):
    """The channel falls outside the parameter regime required by the requested computation."""


class NumericError(GicError):
    """A numeric routine failed to converge within its iteration budget."""


@dataclass(frozen=True)
class ChannelParams:
    """One weak 2-user Gaussian interference channel with unit receiver noise.

    ``a`` is the power cross-gain from transmitter 2 into receiver 1 and ``b``
    the power cross-gain from transmitter 1 into receiver 2; both must lie in
    (0, 1).  ``p1`` and ``p2`` are the (linear) power budgets.
    """

    a: float
    b: float
    p1: float
    p2: float

    def __post_init__(self) -> None:
        if not (0.0 < self.a < 1.0) or not (0.0 < self.b < 1.0):
            raise ValidationError(
                f"cross gains must lie strictly inside (0, 1); got a={self.a}, b={self.b}"
            )
        if self.p1 <= 0.0 or self.p2 <= 0.0:
            raise ValidationError(
                f"power budgets must be positive; got p1={self.p1}, p2={self.p2}"
            )

    @property
    def t1(self) -> float:
        """Private-power threshold (1-a)/(ab) for user 1; recomputed on every read."""
        return (1.0 - self.a) / (self.a * self.b)

    @property
    def t2(self) -> float:
        """Private-power threshold (1-b)/(ab) for user 2."""
        return (1.0 - self.b) / (self.a * self.b)

    def as_dict(self) -> dict[str, float]:
        return {"a": self.a, "b": self.b, "p1": self.p1, "p2": self.p2}


@dataclass(frozen=True)
class PowerSplit:
    """Public-power fractions (rho for user 1, theta for user 2), both in [0, 1]."""

    rho: float
    theta: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.rho <= 1.0) or not (0.0 <= self.theta <= 1.0):
            raise ValidationError(
                f"split fractions must lie in [0, 1]; got rho={self.rho}, theta={self.theta}"
            )

    def private_powers(self, params: ChannelParams) -> tuple[float, float]:
        """Private powers (p1hat, p2hat) = ((1-rho) p1, (1-theta) p2)."""
        return (1.0 - self.rho) * params.p1, (1.0 - self.theta) * params.p2

    @classmethod
    def from_private_powers(
        cls, params: ChannelParams, p1hat: float, p2hat: float
    ) -> "PowerSplit":
        """Inverse of :meth:`private_powers`, with roundoff clamped to [0, 1]."""
        if p1hat < -1e-9 or p2hat < -1e-9:
            raise ValidationError("private powers must be non-negative")
        if p1hat > params.p1 * (1.0 + 1e-9) or p2hat > params.p2 * (1.0 + 1e-9):
            raise ValidationError("private powers cannot exceed the power budgets")
        rho = min(1.0, max(0.0, 1.0 - p1hat / params.p1))
        theta = min(1.0, max(0.0, 1.0 - p2hat / params.p2))
        return cls(rho=rho, theta=theta)


@dataclass(frozen=True)
class RatePair:
    """A non-negative (r1, r2) rate point in bits per channel use."""

    r1: float
    r2: float

    def __post_init__(self) -> None:
        if self.r1 < 0.0 or self.r2 < 0.0:
            raise ValidationError(f"rates must be non-negative; got ({self.r1}, {self.r2})")


def awgn_capacity(signal_power: float, noise_power: float) -> float:
    """Capacity 0.5*log2(1 + S/N) of a Gaussian layer over Gaussian noise.

    Uses log1p so that infinitesimal layers keep full relative precision.
    """
    if noise_power <= 0.0:
        raise ValidationError(f"noise power must be positive; got {noise_power}")
    if signal_power < 0.0:
        raise ValidationError(f"signal power must be non-negative; got {signal_power}")
    return 0.5 * math.log1p(signal_power / noise_power) / LOG2


def noise_at_y1(params: ChannelParams, split: PowerSplit) -> float:
    """Effective noise (1-rho) p1 + a (1-theta) p2 + 1 seen by the public pair at Y1."""
    p1hat, p2hat = split.private_powers(params)
    return p1hat + params.a * p2hat + 1.0


def noise_at_y2(params: ChannelParams, split: PowerSplit) -> float:
    """Effective noise b (1-rho) p1 + (1-theta) p2 + 1 seen by the public pair at Y2."""
    p1hat, p2hat = split.private_powers(params)
    return params.b * p1hat + p2hat + 1.0


def private_rate_user1(params: ChannelParams, p1hat: float, p2hat: float) -> float:
    """Rate of user 1's private layer, decoded at Y1 after all public layers.

    The other user's private power is interference: 0.5*log2(1 + p1hat/(a p2hat + 1)).
    """
    _check_private_powers(params, p1hat, p2hat)
    return awgn_capacity(p1hat, params.a * p2hat + 1.0)


def private_rate_user2(params: ChannelParams, p1hat: float, p2hat: float) -> float:
    """Mirror of :func:`private_rate_user1`: 0.5*log2(1 + p2hat/(b p1hat + 1))."""
    _check_private_powers(params, p1hat, p2hat)
    return awgn_capacity(p2hat, params.b * p1hat + 1.0)


def _check_private_powers(params: ChannelParams, p1hat: float, p2hat: float) -> None:
    slack = 1e-9
    if not (-slack <= p1hat <= params.p1 * (1.0 + slack) + slack):
        raise ValidationError(f"p1hat={p1hat} outside [0, p1={params.p1}]")
    if not (-slack <= p2hat <= params.p2 * (1.0 + slack) + slack):
        raise ValidationError(f"p2hat={p2hat} outside [0, p2={params.p2}]")


def scsd_layer_rates(
    total_power: float, noise_power: float, num_layers: int
) -> list[float]:
    """Per-layer rates of an equal-power superposition-coding stack.

    Layer l (1-based, top to bottom in decoding order) carries
    0.5*log2(1 + dP / ((L - l) dP + noise)) with dP = total_power / L.
    The rates telescope: their sum equals awgn_capacity(total_power, noise).
    """
    if num_layers < 1:
        raise ValidationError(f"num_layers must be >= 1; got {num_layers}")
    if total_power < 0.0:
        raise ValidationError(f"total power must be non-negative; got {total_power}")
    if noise_power <= 0.0:
        raise ValidationError(f"noise power must be positive; got {noise_power}")
    dp = total_power / num_layers
    return [
        awgn_capacity(dp, (num_layers - layer) * dp + noise_power)
        for layer in range(1, num_layers + 1)
    ]


def swap_users(params: ChannelParams) -> ChannelParams:
    """Exchange the two users: p1 <-> p2, a <-> b.  An involution."""
    return ChannelParams(a=params.b, b=params.a, p1=params.p2, p2=params.p1)
