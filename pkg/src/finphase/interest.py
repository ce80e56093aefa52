"""Interest floor from Gaussian reserve-excursion risk, and the linear
reserve dynamics dB/dt = G - T - S.

A loan of size ``loan`` against pre-loan reserves ``reserves`` fails the
bank when the year's maximal excursion W of reserves from their mean lands
in (-reserves, -(reserves - loan)]: withdrawals the pre-loan reserves
would have survived but the post-loan reserves cannot. With W Gaussian,
that band probability times the banker's capital is the expected cost of
the loan, and cost/loan is the minimum rational interest rate.

Pure functions; thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    LoanExceedsReserves,
    NonpositiveLoan,
    NonpositiveSigma,
    NonpositiveStep,
)
from .ledger import Money


@dataclass(frozen=True)
class ReserveRiskModel:
    banker_capital: Money  # lost if the bank fails
    reserves: Money  # pre-loan reserve level
    sigma: float  # std. dev. of the annual maximal excursion W
    mean_excursion: float = 0.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise NonpositiveSigma(f"sigma must be > 0, got {self.sigma}")
        if self.reserves < 0:
            raise ValueError("reserves must be >= 0")


@dataclass(frozen=True)
class ReserveFlowParams:
    B0: Money  # initial private-bank reserves
    G: Money  # government payments per year
    Tx: Money  # tax payments per year
    S: Money  # government security sales per year


def gaussian_cdf(x: float, mean: float = 0.0, sigma: float = 1.0) -> float:
    """Phi((x - mean)/sigma) via the C library's erfc; absolute error is
    at the few-ulp level, far below the 1e-10 documented bound."""
    return 0.5 * math.erfc((mean - x) / (sigma * math.sqrt(2.0)))


def excursion_exceedance(model: ReserveRiskModel, loan: Money) -> float:
    """Pr{ -reserves < W <= -(reserves - loan) } for Gaussian W.

    The incremental failure probability created by the loan, not the
    bank's total failure probability.
    """
    if loan < 0:
        raise ValueError("loan must be >= 0")
    if loan > model.reserves:
        raise LoanExceedsReserves(
            f"loan {loan} exceeds reserves {model.reserves}"
        )
    hi = gaussian_cdf(-(model.reserves - loan), model.mean_excursion, model.sigma)
    lo = gaussian_cdf(-model.reserves, model.mean_excursion, model.sigma)
    return max(hi - lo, 0.0)


def expected_loan_cost(model: ReserveRiskModel, loan: Money) -> float:
    """banker_capital * excursion_exceedance."""
    return model.banker_capital * excursion_exceedance(model, loan)


def min_interest_rate(model: ReserveRiskModel, loan: Money) -> float:
    """Lower bound on the rational annual interest rate: expected cost of
    the loan divided by the loan."""
    if loan <= 0:
        raise NonpositiveLoan(f"loan must be > 0, got {loan}")
    return expected_loan_cost(model, loan) / loan


def reserve_path(
    params: ReserveFlowParams, dt: float, n: int
) -> list[tuple[float, float]]:
    """B(t) = B0 + (G - Tx - S) * t sampled at t = k*dt, k = 0..n.

    The law is exactly linear, so the path carries no integration error.
    """
    if dt <= 0:
        raise NonpositiveStep(f"dt must be > 0, got {dt}")
    if n < 0:
        raise ValueError("n must be >= 0")
    flow = params.G - params.Tx - params.S
    return [(k * dt, params.B0 + flow * (k * dt)) for k in range(n + 1)]
