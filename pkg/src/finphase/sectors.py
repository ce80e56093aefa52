"""Sectoral net-lending tables and the zero-sum identity.

The conservation of borrowing and lending applies to whole economic
sectors exactly as it does to individual agents: the sectoral balances
must sum to zero. Balances are integer money in an explicit scale unit
(e.g. billions) so the identity is checked exactly, never in floats.

Pure functions over immutable tables; thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .errors import DuplicateSector, ParseError, UnknownSector
from .ledger import Money


@dataclass(frozen=True)
class SectorTable:
    period: str
    scale: str
    entries: tuple  # ordered (sector_name, balance) pairs

    def __post_init__(self):
        names = [name for name, _ in self.entries]
        if len(names) != len(set(names)):
            raise DuplicateSector("sector names must be unique")
        if len(names) < 2:
            raise ValueError("a sector table needs at least 2 sectors")

    def balance(self, sector: str) -> Money:
        for name, value in self.entries:
            if name == sector:
                return value
        raise UnknownSector(f"no sector named {sector!r}")

    def sectors(self) -> tuple:
        return tuple(name for name, _ in self.entries)


@dataclass(frozen=True)
class BalanceReport:
    residual: Money
    is_balanced: bool  # |residual| <= tolerance
    largest_surplus: str
    largest_deficit: str


@dataclass(frozen=True)
class CounterfactualResult:
    table: SectorTable
    required_offset: Money  # -(residual of the new table)


def load_sectors(path) -> SectorTable:
    """Parse a ``sector,balance`` CSV with optional ``#period,`` and
    ``#scale,`` metadata lines; malformed rows are hard errors."""
    period = ""
    scale = ""
    entries: list[tuple[str, Money]] = []
    seen: set[str] = set()
    with open(path, newline="") as fh:
        lines = fh.readlines()
    saw_header = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#period,"):
            period = line.split(",", 1)[1]
            continue
        if line.startswith("#scale,"):
            scale = line.split(",", 1)[1]
            continue
        if line.startswith("#"):
            raise ParseError(lineno, f"unknown metadata line {line!r}")
        parts = line.split(",")
        if parts[0] == "sector":
            if parts != ["sector", "balance"]:
                raise ParseError(lineno, "header must be 'sector,balance'")
            saw_header = True
            continue
        if len(parts) != 2:
            raise ParseError(lineno, f"expected 'sector,balance', got {line!r}")
        name = parts[0].strip()
        if not name:
            raise ParseError(lineno, "empty sector name")
        if name in seen:
            raise DuplicateSector(f"sector {name!r} listed twice")
        seen.add(name)
        try:
            value = int(parts[1])
        except ValueError:
            raise ParseError(lineno, f"balance {parts[1]!r} is not an integer")
        entries.append((name, value))
    if not saw_header:
        raise ParseError(1, "missing 'sector,balance' header")
    if len(entries) < 2:
        raise ParseError(len(lines) or 1, "need at least 2 sector rows")
    return SectorTable(period, scale, tuple(entries))


def dump_sectors(table: SectorTable, path) -> None:
    """Inverse of :func:`load_sectors`; round-trips bit-exactly."""
    with open(path, "w", newline="") as fh:
        if table.period:
            fh.write(f"#period,{table.period}\n")
        if table.scale:
            fh.write(f"#scale,{table.scale}\n")
        fh.write("sector,balance\n")
        for name, value in table.entries:
            fh.write(f"{name},{value}\n")


def check_zero_sum(table: SectorTable, tolerance: Money = 0) -> BalanceReport:
    """Sum the balances and report against the declared tolerance."""
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    residual = sum(value for _, value in table.entries)
    largest_surplus = max(table.entries, key=lambda e: e[1])[0]
    largest_deficit = min(table.entries, key=lambda e: e[1])[0]
    return BalanceReport(
        residual=residual,
        is_balanced=abs(residual) <= tolerance,
        largest_surplus=largest_surplus,
        largest_deficit=largest_deficit,
    )


def counterfactual(
    table: SectorTable, sector: str, new_value: Money
) -> CounterfactualResult:
    """Set one sector's balance and report the aggregate adjustment the
    other sectors must absorb for the zero-sum identity to hold again
    (required_offset = -(new residual)); how that adjustment distributes
    across sectors is deliberately not guessed."""
    table.balance(sector)  # raises UnknownSector
    entries = tuple(
        (name, new_value if name == sector else value)
        for name, value in table.entries
    )
    new_table = SectorTable(table.period, table.scale, entries)
    new_residual = sum(value for _, value in entries)
    return CounterfactualResult(new_table, -new_residual)


def bundled_eurozone_2012q1() -> SectorTable:
    """The packaged Eurozone 2012 Q1 net-surplus table (billions of
    euros): Households 48, Nonfinancial 22, Financial 39, Govt -122,
    RestOfWorld 13 -- which sums to exactly zero."""
    ref = resources.files("finphase.data").joinpath("eurozone_2012q1.csv")
    with resources.as_file(ref) as path:
        return load_sectors(path)
