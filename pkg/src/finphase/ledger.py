"""Exact double-entry money ledger for a single-bank credit economy.

All amounts are integer minor currency units (``Money = int``) constrained
to the signed 64-bit range, so the central conservation identity

    sum(deposit - debt over all agents) + bank_equity == base_money

holds bit-exactly after every operation, never approximately. Deposits and
debts are always non-negative; an agent's net position is derived, never
stored. Loan creation adds a matching asset/liability pair to one account,
repayment cancels such a pair, and bankruptcy annihilation wipes an account
with the difference absorbed by bank equity (which may go negative).

Failed operations never partially apply: all preconditions are checked
before any state is touched.

Concurrency: a Ledger has a single writer; read-only queries are safe
concurrently when nothing is mutating.
"""

from __future__ import annotations

import csv
from typing import Iterator, NamedTuple, Optional, Sequence

from .errors import (
    InsufficientFunds,
    MoneyOverflow,
    NoSuchDebt,
    SelfTransfer,
    UnknownAgent,
)

Money = int
AgentId = int

MONEY_MAX = 2**63 - 1
MONEY_MIN = -(2**63)


class Account(NamedTuple):
    """Deposit/debt pair for one agent; both sides are always >= 0."""

    deposit: Money
    debt: Money


def _check_amount(amount: Money) -> None:
    if amount < 0:
        raise ValueError(f"amount must be >= 0, got {amount}")
    if amount > MONEY_MAX:
        raise MoneyOverflow(f"amount {amount} exceeds 64-bit money range")


class Ledger:
    """Complete account map of the single bank plus its equity.

    Agent ids are dense ``0 .. n_agents-1``. ``base_money`` is fixed at
    construction; ``bank_equity`` is initialised to
    ``base_money - sum(initial_deposits)`` so the conservation identity
    holds from birth (with no initial deposits the whole base money sits
    as bank equity, i.e. as the bank's reserve).
    """

    __slots__ = ("_dep", "_debt", "_bank_equity", "_base_money")

    def __init__(
        self,
        n_agents: int,
        base_money: Money,
        initial_deposits: Optional[Sequence[Money]] = None,
    ):
        if n_agents < 0:
            raise ValueError("n_agents must be >= 0")
        if not 0 <= base_money <= MONEY_MAX:
            raise MoneyOverflow(f"base_money {base_money} out of range")
        if initial_deposits is None:
            self._dep = [0] * n_agents
        else:
            if len(initial_deposits) != n_agents:
                raise ValueError("initial_deposits length != n_agents")
            for d in initial_deposits:
                _check_amount(d)
            self._dep = list(initial_deposits)
        self._debt = [0] * n_agents
        self._base_money = base_money
        self._bank_equity = base_money - sum(self._dep)
        if self._bank_equity < MONEY_MIN:
            raise MoneyOverflow("initial deposits exceed representable equity")

    # -- queries -----------------------------------------------------------

    @property
    def n_agents(self) -> int:
        return len(self._dep)

    @property
    def base_money(self) -> Money:
        return self._base_money

    @property
    def bank_equity(self) -> Money:
        return self._bank_equity

    def _check_agent(self, agent: AgentId) -> None:
        if not 0 <= agent < len(self._dep):
            raise UnknownAgent(f"no agent {agent} in ledger of {len(self._dep)}")

    def account(self, agent: AgentId) -> Account:
        self._check_agent(agent)
        return Account(self._dep[agent], self._debt[agent])

    def deposit(self, agent: AgentId) -> Money:
        self._check_agent(agent)
        return self._dep[agent]

    def debt(self, agent: AgentId) -> Money:
        self._check_agent(agent)
        return self._debt[agent]

    def net_position(self, agent: AgentId) -> Money:
        """deposit - debt (signed)."""
        self._check_agent(agent)
        return self._dep[agent] - self._debt[agent]

    def accounts(self) -> Iterator[tuple[AgentId, Account]]:
        for i, (d, b) in enumerate(zip(self._dep, self._debt)):
            yield i, Account(d, b)

    def deposits_view(self) -> Sequence[Money]:
        """The live deposit column, indexed by agent id.

        Read-only by contract: mutations must go through the operations
        below. Exposed so simulation hot loops can read balances without
        per-call overhead.
        """
        return self._dep

    def debts_view(self) -> Sequence[Money]:
        """The live debt column; same read-only contract as deposits_view."""
        return self._debt

    def conservation_residual(self) -> Money:
        """sum(deposit - debt) + bank_equity - base_money; must be 0.

        Computed by full summation every call, not tracked incrementally,
        so it doubles as a self-check of the operation postconditions.
        """
        return sum(self._dep) - sum(self._debt) + self._bank_equity - self._base_money

    # -- operations ----------------------------------------------------------

    def transfer(self, src: AgentId, dst: AgentId, amount: Money) -> None:
        """Move ``amount`` of deposit from ``src`` to ``dst`` (zero-sum)."""
        self._check_agent(src)
        self._check_agent(dst)
        if src == dst:
            raise SelfTransfer(f"agent {src} cannot transfer to itself")
        _check_amount(amount)
        if self._dep[src] < amount:
            raise InsufficientFunds(
                f"agent {src} holds {self._dep[src]}, needs {amount}"
            )
        new_dst = self._dep[dst] + amount
        if new_dst > MONEY_MAX:
            raise MoneyOverflow("deposit overflow on transfer")
        self._dep[src] -= amount
        self._dep[dst] = new_dst

    def create_loan(self, borrower: AgentId, amount: Money) -> None:
        """Create a deposit/debt pair: the borrower's net position is unchanged."""
        self._check_agent(borrower)
        _check_amount(amount)
        new_dep = self._dep[borrower] + amount
        new_debt = self._debt[borrower] + amount
        if new_dep > MONEY_MAX or new_debt > MONEY_MAX:
            raise MoneyOverflow("loan would overflow deposit or debt")
        self._dep[borrower] = new_dep
        self._debt[borrower] = new_debt

    def repay_loan(self, borrower: AgentId, amount: Money) -> None:
        """Cancel a deposit/debt pair; exact inverse of create_loan."""
        self._check_agent(borrower)
        _check_amount(amount)
        if self._dep[borrower] < amount:
            raise InsufficientFunds(
                f"agent {borrower} holds {self._dep[borrower]}, repaying {amount}"
            )
        if self._debt[borrower] < amount:
            raise NoSuchDebt(
                f"agent {borrower} owes {self._debt[borrower]}, repaying {amount}"
            )
        self._dep[borrower] -= amount
        self._debt[borrower] -= amount

    def annihilate(self, bankrupt: AgentId) -> None:
        """Write off an account: deposit and debt both go to zero.

        The net write-off (deposit - debt) lands on bank equity, which may
        go negative; conservation holds exactly either way.
        """
        self._check_agent(bankrupt)
        delta = self._dep[bankrupt] - self._debt[bankrupt]
        new_equity = self._bank_equity + delta
        if not MONEY_MIN <= new_equity <= MONEY_MAX:
            raise MoneyOverflow("bank equity overflow on annihilation")
        self._dep[bankrupt] = 0
        self._debt[bankrupt] = 0
        self._bank_equity = new_equity

    def pay_to_bank(self, agent: AgentId, amount: Money) -> None:
        """Move deposit from an agent into bank equity (e.g. interest)."""
        self._check_agent(agent)
        _check_amount(amount)
        if self._dep[agent] < amount:
            raise InsufficientFunds(
                f"agent {agent} holds {self._dep[agent]}, paying bank {amount}"
            )
        new_equity = self._bank_equity + amount
        if new_equity > MONEY_MAX:
            raise MoneyOverflow("bank equity overflow")
        self._dep[agent] -= amount
        self._bank_equity = new_equity

    def pay_from_bank(self, agent: AgentId, amount: Money) -> None:
        """Move bank equity into an agent's deposit; equity may go negative."""
        self._check_agent(agent)
        _check_amount(amount)
        new_dep = self._dep[agent] + amount
        new_equity = self._bank_equity - amount
        if new_dep > MONEY_MAX:
            raise MoneyOverflow("deposit overflow")
        if new_equity < MONEY_MIN:
            raise MoneyOverflow("bank equity underflow")
        self._dep[agent] = new_dep
        self._bank_equity = new_equity

    # -- snapshots -----------------------------------------------------------

    def copy(self) -> "Ledger":
        clone = Ledger.__new__(Ledger)
        clone._dep = list(self._dep)
        clone._debt = list(self._debt)
        clone._bank_equity = self._bank_equity
        clone._base_money = self._base_money
        return clone

    def write_csv(self, path) -> None:
        """Dump ``agent_id,deposit,debt`` rows plus equity/base trailers."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["agent_id", "deposit", "debt"])
            for i, (d, b) in enumerate(zip(self._dep, self._debt)):
                writer.writerow([i, d, b])
            fh.write(f"#bank_equity,{self._bank_equity}\n")
            fh.write(f"#base_money,{self._base_money}\n")

    @classmethod
    def read_csv(cls, path) -> "Ledger":
        """Rebuild a ledger from :meth:`write_csv` output."""
        deposits: list[Money] = []
        debts: list[Money] = []
        equity = None
        base = None
        with open(path, newline="") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("agent_id"):
                    continue
                if line.startswith("#bank_equity,"):
                    equity = int(line.split(",", 1)[1])
                elif line.startswith("#base_money,"):
                    base = int(line.split(",", 1)[1])
                else:
                    _, d, b = line.split(",")
                    deposits.append(int(d))
                    debts.append(int(b))
        if equity is None or base is None:
            raise ValueError("snapshot missing #bank_equity/#base_money trailers")
        clone = cls.__new__(cls)
        clone._dep = deposits
        clone._debt = debts
        clone._bank_equity = equity
        clone._base_money = base
        return clone
