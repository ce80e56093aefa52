"""Closed-form macro model: average profit rate, its dynamic equilibrium,
logistic time evolution, required productivity growth, net resource and
emission rates, and compound-growth utilities.

All rates are dimensionless fractions per year (never percent); pure
functions throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    NonpositiveCapital,
    NonpositiveInitialRate,
    NonpositiveLambda,
    NonpositiveLevel,
    NonpositiveStep,
    TooFewPoints,
)


@dataclass(frozen=True)
class MacroParams:
    """Aggregate parameters: surplus fraction rho, labour flow L
    (person-hours/year), labour-time to reproduce the capital stock K
    (person-hours), growth rates g_L and g_P (/year), depreciation d
    (/year), and investment/profit ratio lambda_."""

    rho: float
    L: float
    K: float
    g_L: float
    g_P: float
    d: float
    lambda_: float


@dataclass(frozen=True)
class RateSeries:
    t: tuple  # years, strictly increasing
    value: tuple  # rate or level at each t

    def __post_init__(self):
        if len(self.t) != len(self.value):
            raise ValueError("t and value must have equal length")
        if any(b <= a for a, b in zip(self.t, self.t[1:])):
            raise ValueError("t must be strictly increasing")


def average_profit_rate(p: MacroParams) -> float:
    """R = rho * L / K."""
    if p.K <= 0:
        raise NonpositiveCapital(f"K must be > 0, got {p.K}")
    return p.rho * p.L / p.K


def equilibrium_rate(g_L: float, g_P: float, d: float, lambda_: float) -> float:
    """R* = (g_L + g_P + d) / lambda; the fixed point of the profit-rate
    growth dynamics."""
    if lambda_ <= 0:
        raise NonpositiveLambda(f"lambda must be > 0, got {lambda_}")
    return (g_L + g_P + d) / lambda_


def required_productivity(
    R_target: float, lambda_: float, g_L: float, d: float
) -> float:
    """g_P needed to sustain R_target: lambda * R_target - (g_L + d).

    Exact algebraic inverse of :func:`equilibrium_rate`; may be negative.
    """
    return lambda_ * R_target - (g_L + d)


def net_rate(growth: float, offset: float) -> float:
    """growth - offset: relative depletion rate of a resource stock
    (g_N - g_beta) or relative emission rate (g_E - g_alpha); positive
    means the stock is being depleted / the pollution level is rising."""
    return growth - offset


def profit_rate_trajectory(
    R0: float,
    g_L: float,
    g_P: float,
    d: float,
    lambda_: float,
    dt: float,
    n: int,
) -> RateSeries:
    """Integrate dR/dt = R * (g_L + g_P + d - lambda * R) with classic
    4th-order Runge-Kutta at fixed step dt, holding rho constant.

    The dynamics are logistic with fixed point R* = (g_L+g_P+d)/lambda, so
    the closed-form solution is available as an independent test oracle.
    """
    if R0 <= 0:
        raise NonpositiveInitialRate(f"R0 must be > 0, got {R0}")
    if dt <= 0:
        raise NonpositiveStep(f"dt must be > 0, got {dt}")
    if n < 0:
        raise ValueError("n must be >= 0")
    if lambda_ <= 0:
        raise NonpositiveLambda(f"lambda must be > 0, got {lambda_}")
    a = g_L + g_P + d

    def f(r: float) -> float:
        return r * (a - lambda_ * r)

    ts = [0.0]
    values = [R0]
    r = R0
    for k in range(n):
        k1 = f(r)
        k2 = f(r + 0.5 * dt * k1)
        k3 = f(r + 0.5 * dt * k2)
        k4 = f(r + dt * k3)
        r = r + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ts.append((k + 1) * dt)
        values.append(r)
    return RateSeries(tuple(ts), tuple(values))


def cagr(t: Sequence[float], levels: Sequence[float]) -> float:
    """Compound annual growth rate between the first and last points:
    (v_end / v_start) ** (1 / (t_end - t_start)) - 1."""
    if len(t) < 2 or len(levels) < 2:
        raise TooFewPoints("cagr needs at least 2 points")
    if len(t) != len(levels):
        raise ValueError("t and levels must have equal length")
    if any(b <= a for a, b in zip(t, t[1:])):
        raise ValueError("t must be strictly increasing")
    for v in levels:
        if v <= 0:
            raise NonpositiveLevel(f"levels must be > 0, got {v}")
    span = t[-1] - t[0]
    return math.exp(math.log(levels[-1] / levels[0]) / span) - 1.0
