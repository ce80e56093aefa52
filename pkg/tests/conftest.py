"""Shared test helpers."""

from finphase.ledger import Ledger


def conservation_oracle(ledger: Ledger) -> int:
    """Independent full-summation check of the conservation identity.

    Deliberately avoids Ledger.conservation_residual so the two routes
    can disagree if either is wrong.
    """
    total = 0
    for _, account in ledger.accounts():
        assert account.deposit >= 0
        assert account.debt >= 0
        total += account.deposit - account.debt
    return total + ledger.bank_equity - ledger.base_money
