"""Exception hierarchy shared across the package.

Every domain failure raises a subclass of :class:`FinphaseError` so the CLI
can separate domain errors (exit 1) from usage errors (exit 2) and bugs.
"""


class FinphaseError(Exception):
    """Base class for all domain errors raised by this package."""


# --- ledger ---------------------------------------------------------------

class UnknownAgent(FinphaseError):
    """Agent id is not present in the ledger."""


class SelfTransfer(FinphaseError):
    """Transfer where payer and payee are the same agent."""


class InsufficientFunds(FinphaseError):
    """Deposit too small to cover the requested amount."""


class NoSuchDebt(FinphaseError):
    """Repayment larger than the outstanding debt."""


class MoneyOverflow(FinphaseError):
    """Result of a money operation left the signed 64-bit range."""


# --- simulation configs ---------------------------------------------------

class InvalidConfig(FinphaseError):
    """Configuration violates a documented precondition."""


class DegenerateSample(FinphaseError):
    """Sample carries no usable signal (e.g. all-zero wealth)."""


# --- phase analytics ------------------------------------------------------

class EmptyHistogram(FinphaseError):
    """Histogram holds no in-range points."""


class TooFewPoints(FinphaseError):
    """Statistic needs more data points than were supplied."""


# --- macro rates ----------------------------------------------------------

class NonpositiveCapital(FinphaseError):
    """Capital stock must be > 0."""


class NonpositiveLambda(FinphaseError):
    """Investment/profit ratio must be > 0."""


class NonpositiveInitialRate(FinphaseError):
    """Trajectory start rate must be > 0."""


class NonpositiveStep(FinphaseError):
    """Step size must be > 0."""


class NonpositiveLevel(FinphaseError):
    """Growth-rate computation needs strictly positive levels."""


# --- bank interest --------------------------------------------------------

class NonpositiveSigma(FinphaseError):
    """Excursion standard deviation must be > 0."""


class LoanExceedsReserves(FinphaseError):
    """Loan larger than the pre-loan reserves."""


class NonpositiveLoan(FinphaseError):
    """Interest floor needs a loan > 0."""


# --- sector tables --------------------------------------------------------

class ParseError(FinphaseError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateSector(FinphaseError):
    """Sector name appears more than once in one table."""


class UnknownSector(FinphaseError):
    """Named sector is not in the table."""
