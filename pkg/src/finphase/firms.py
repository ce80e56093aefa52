"""Agent-based capitalist economy: firms, workers, and one bank.

Firms pay wages (borrowing on any shortfall), workers spend everything
they earn at the firm they shop at, indebted firms pay interest into bank
equity, and firms then act on their situation: involuntary borrowers (A)
have already had to borrow to stay in operation, voluntary borrowers (B)
with profit rates well above the interest rate borrow to invest, and
voluntary lenders (C) pay debts down and hoard the rest. Firms whose net
debt exceeds their capital stock are bankrupted: the annihilation
write-off is absorbed by bank equity and a fresh firm re-enters at the
phase-plane origin.

Each worker's shop is drawn uniformly at random once at initialisation
and persists (apart from an optional per-step churn fraction). The
resulting market niches make profitability a persistent firm
characteristic, which is what drives the polarisation: without it every
firm mean-reverts to the origin, no firm is ever pushed through the
bankruptcy wall, and no rentier class precipitates out. Capital-goods
purchases settle at cost, so investment demand moves money without
creating margin income for the seller; only consumption sales carry
profit. (Letting investment sales count as profit produces a runaway
profit -> investment -> profit loop that inflates every balance sheet in
step, which kills the phase-plane dynamics instead of polarising them.)

Tracked per firm and per step is the phase point (x, y) with
x = net debt / capital stock and y = (change in net debt) / capital
stock. Starting from a point mass at the origin the population polarises:
a head of leveraged producers pressed toward the bankruptcy wall at
x = 1 and a lengthening rentier tail at x < 0.

Money split at initialisation: all agents (firms and workers) start with
zero balances and the entire base money sits as bank equity, i.e. as the
bank's reserve; every circulating euro is endogenous credit money. This
is what puts every firm exactly at the origin at t = 0 and lets a
post-bankruptcy replacement re-enter at the origin as well (its money
endowment from bank equity is the initial per-firm endowment: zero).

The ledger conservation residual is zero after every step, bit-exactly.
One economy instance is sequential; independent seeds are independent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import rng
from .errors import InvalidConfig
from .ledger import Ledger, Money
from .phase import PhasePoint

# The simulation step is the pay period ("the week"); annual rates are
# converted with this documented constant.
STEPS_PER_YEAR = 50

# Substream purposes, combined with (seed, step).
_TAG_WORKER_TARGET = 1
_TAG_OWNER_TARGET = 2
_TAG_INVEST_TARGET = 3
_TAG_CHURN = 4


class FirmClass(enum.IntEnum):
    A_INVOLUNTARY_BORROWER = 0
    B_VOLUNTARY_BORROWER = 1
    C_VOLUNTARY_LENDER = 2


@dataclass(frozen=True)
class EconomyConfig:
    """Simulation parameters.

    interest_rate and depreciation are per step; investment_margin is the
    annual spread over the annualised interest rate that marks a firm as
    a voluntary borrower. ``markup`` is validated but unused by the
    current revenue rule (revenue is whatever consumption and investment
    spending arrives; there are no posted prices); it is kept for
    price-setting variants. ``initial_capital`` is the book value of a
    fresh firm's equipment.
    """

    n_firms: int = 1000
    n_workers: int = 10000
    base_money: Money = 10**9
    wage: Money = 100
    markup: float = 1.0
    interest_rate: float = 0.005
    investment_margin: float = 0.01
    depreciation: float = 0.01
    capitalist_consumption_fraction: float = 0.05
    n_steps: int = 20
    seed: int = 0
    initial_capital: Money = 3000
    customer_churn: float = 0.0

    def validate(self) -> None:
        if self.n_firms < 1:
            raise InvalidConfig("n_firms must be >= 1")
        if self.n_workers < 0:
            raise InvalidConfig("n_workers must be >= 0")
        if self.base_money < 0:
            raise InvalidConfig("base_money must be >= 0")
        if self.wage < 0:
            raise InvalidConfig("wage must be >= 0")
        if self.markup <= 0:
            raise InvalidConfig("markup must be > 0")
        if self.interest_rate < 0:
            raise InvalidConfig("interest_rate must be >= 0")
        if self.investment_margin < 0:
            raise InvalidConfig("investment_margin must be >= 0")
        if not 0 <= self.depreciation < 1:
            raise InvalidConfig("depreciation must be in [0, 1)")
        if not 0 <= self.capitalist_consumption_fraction <= 1:
            raise InvalidConfig("capitalist_consumption_fraction must be in [0, 1]")
        if self.n_steps < 0:
            raise InvalidConfig("n_steps must be >= 0")
        if self.initial_capital < 1:
            raise InvalidConfig("initial_capital must be >= 1")
        if not 0 <= self.customer_churn <= 1:
            raise InvalidConfig("customer_churn must be in [0, 1]")


@dataclass(frozen=True)
class FirmState:
    id: int
    capital_stock: Money
    employees: int
    last_profit: Money
    cls: FirmClass


@dataclass(frozen=True)
class StepRecord:
    t: int
    points: tuple  # one PhasePoint per firm
    class_counts: tuple  # (A, B, C) at classification time
    bankruptcies: int
    conservation_residual: Money


@dataclass
class EconomyState:
    config: EconomyConfig
    ledger: Ledger
    capital: list  # book value per firm
    last_profit: list  # previous step's profit per firm
    prev_net_debt: list  # net debt at the previous step boundary
    cls: list  # FirmClass per firm, from the latest classification
    employees: list  # headcount per firm
    t: int = 0
    worker_firm: list = field(default_factory=list)  # employer per worker
    worker_shop: list = field(default_factory=list)  # current shop per worker

    def firm_state(self, i: int) -> FirmState:
        return FirmState(
            id=i,
            capital_stock=self.capital[i],
            employees=self.employees[i],
            last_profit=self.last_profit[i],
            cls=FirmClass(self.cls[i]),
        )

    def net_debt(self, i: int) -> Money:
        return self.ledger.debt(i) - self.ledger.deposit(i)


def classify(
    last_profit: Money,
    interest_due: Money,
    profit_rate: float,
    interest_rate: float,
    margin: float,
) -> FirmClass:
    """Classify a firm from its last profit and current position.

    A (involuntary borrower) if last_profit < the interest due on its net
    debt -- it must borrow just to service what it owes. B (voluntary
    borrower) if the annualised profit rate beats interest_rate + margin.
    C (voluntary lender) otherwise.
    """
    if last_profit < interest_due:
        return FirmClass.A_INVOLUNTARY_BORROWER
    if profit_rate > interest_rate + margin:
        return FirmClass.B_VOLUNTARY_BORROWER
    return FirmClass.C_VOLUNTARY_LENDER


def init_economy(config: EconomyConfig) -> EconomyState:
    """Set up the ledger and firm book values; all firms at the origin.

    Each worker also draws, uniformly at random, the firm it shops at;
    this market niche persists across steps apart from the per-step
    customer_churn fraction, which is what gives firms persistently
    different profitability.
    """
    config.validate()
    n = config.n_firms
    ledger = Ledger(n + config.n_workers, config.base_money)
    worker_firm = [j % n for j in range(config.n_workers)]
    employees = [0] * n
    for f in worker_firm:
        employees[f] += 1
    worker_shop = rng.randint_block(
        rng.derive(config.seed, 0, _TAG_WORKER_TARGET), 0, config.n_workers, n
    ).tolist()
    return EconomyState(
        config=config,
        ledger=ledger,
        capital=[config.initial_capital] * n,
        last_profit=[0] * n,
        prev_net_debt=[0] * n,
        cls=[FirmClass.C_VOLUNTARY_LENDER] * n,
        employees=employees,
        t=0,
        worker_firm=worker_firm,
        worker_shop=worker_shop,
    )


def _record(state: EconomyState, points, class_counts, bankruptcies) -> StepRecord:
    return StepRecord(
        t=state.t,
        points=tuple(points),
        class_counts=class_counts,
        bankruptcies=bankruptcies,
        conservation_residual=state.ledger.conservation_residual(),
    )


def initial_record(state: EconomyState) -> StepRecord:
    """The t = 0 snapshot: every firm at the origin, nothing classified."""
    return _record(
        state, [PhasePoint(0.0, 0.0)] * state.config.n_firms, (0, 0, 0), 0
    )


def step(state: EconomyState) -> StepRecord:
    """Advance one step in fixed order: wages, consumption, interest,
    classification + investment/repayment, depreciation, bankruptcy,
    record. Mutates the state and returns the step's record."""
    cfg = state.config
    n = cfg.n_firms
    ledger = state.ledger
    dep = ledger.deposits_view()
    debt = ledger.debts_view()
    t = state.t + 1
    seed = cfg.seed
    wage = cfg.wage
    capital = state.capital
    receipts = [0] * n
    wages_paid = [0] * n
    interest_paid = [0] * n

    # (1) wages, borrowing any shortfall
    for i in range(n):
        bill = wage * state.employees[i]
        if bill:
            short = bill - dep[i]
            if short > 0:
                ledger.create_loan(i, short)
            wages_paid[i] = bill
    for j, f in enumerate(state.worker_firm):
        if wage:
            ledger.transfer(f, n + j, wage)

    # (2) consumption: workers spend everything at their shop (a churn
    # fraction re-picks its shop uniformly first), then owners draw a
    # fraction of their firm's deposit and spend it at a random other firm
    if cfg.n_workers:
        shops = state.worker_shop
        if cfg.customer_churn > 0:
            churn_u = rng.uniform_block(
                rng.derive(seed, t, _TAG_CHURN), 0, cfg.n_workers
            ).tolist()
            new_shops = rng.randint_block(
                rng.derive(seed, t, _TAG_WORKER_TARGET), 0, cfg.n_workers, n
            ).tolist()
            churn = cfg.customer_churn
            for j, u in enumerate(churn_u):
                if u < churn:
                    shops[j] = new_shops[j]
        for j, shop in enumerate(shops):
            w = n + j
            bal = dep[w]
            if bal:
                ledger.transfer(w, shop, bal)
                receipts[shop] += bal
    frac = cfg.capitalist_consumption_fraction
    if frac > 0 and n > 1:
        offsets = rng.randint_block(
            rng.derive(seed, t, _TAG_OWNER_TARGET), 0, n, n - 1
        ).tolist()
        for i in range(n):
            draw = int(dep[i] * frac)
            if draw:
                shop = (i + 1 + offsets[i]) % n
                ledger.transfer(i, shop, draw)
                receipts[shop] += draw

    # (3) interest on outstanding debt, paid into bank equity
    rate = cfg.interest_rate
    if rate > 0:
        for i in range(n):
            due = int(debt[i] * rate)
            if due:
                short = due - dep[i]
                if short > 0:
                    ledger.create_loan(i, short)
                ledger.pay_to_bank(i, due)
                interest_paid[i] = due

    # (4) classification, then investment (B) or repayment (C)
    annual_rate = rate * STEPS_PER_YEAR
    margin = cfg.investment_margin
    invest_offsets = None
    if n > 1:
        invest_offsets = rng.randint_block(
            rng.derive(seed, t, _TAG_INVEST_TARGET), 0, n, n - 1
        ).tolist()
    counts = [0, 0, 0]
    for i in range(n):
        nd = debt[i] - dep[i]
        due = int(nd * rate) if nd > 0 else 0
        lp = state.last_profit[i]
        profit_rate = lp * STEPS_PER_YEAR / capital[i]
        c = classify(lp, due, profit_rate, annual_rate, margin)
        state.cls[i] = c
        counts[c] += 1
        if c == FirmClass.B_VOLUNTARY_BORROWER:
            if lp > 0 and invest_offsets is not None:
                # Capital goods change hands at cost: the sale adds to the
                # seller's cash but carries no margin, so it does not enter
                # the seller's profit. Only consumption sales do.
                seller = (i + 1 + invest_offsets[i]) % n
                ledger.create_loan(i, lp)
                ledger.transfer(i, seller, lp)
                capital[i] += lp
        elif c == FirmClass.C_VOLUNTARY_LENDER:
            repay = min(dep[i], debt[i])
            if repay:
                ledger.repay_loan(i, repay)

    # (5) depreciation: book-value write-down, no money moves
    dep_rate = cfg.depreciation
    if dep_rate > 0:
        for i in range(n):
            capital[i] -= int(capital[i] * dep_rate)

    # (6) bankruptcy: net debt above capital stock wipes the account and
    # a fresh firm re-enters at the origin
    bankruptcies = 0
    replaced = []
    for i in range(n):
        if debt[i] - dep[i] > capital[i]:
            ledger.annihilate(i)
            capital[i] = cfg.initial_capital
            replaced.append(i)
            bankruptcies += 1

    # (7) profits, phase points, record
    points = []
    prev = state.prev_net_debt
    for i in range(n):
        nd = debt[i] - dep[i]
        k = capital[i]
        points.append(PhasePoint(nd / k, (nd - prev[i]) / k))
        state.last_profit[i] = receipts[i] - wages_paid[i] - interest_paid[i]
        prev[i] = nd
    # replacements carry no history: they re-enter at the origin
    for i in replaced:
        points[i] = PhasePoint(0.0, 0.0)
        state.last_profit[i] = 0
        prev[i] = 0
    state.t = t
    return _record(state, points, (counts[0], counts[1], counts[2]), bankruptcies)


def run(config: EconomyConfig) -> list[StepRecord]:
    """Initialise and advance n_steps; deterministic given the seed.

    Returns one record per step boundary, including the t = 0 snapshot.
    """
    state = init_economy(config)
    records = [initial_record(state)]
    for _ in range(config.n_steps):
        records.append(step(state))
    return records
