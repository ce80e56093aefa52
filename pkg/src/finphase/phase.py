"""Phase-plane density estimation and Boltzmann entropy.

Each agent is a point (x, y) = (debt ratio, normalized debt change). The
probability density is estimated by per-pixel binning on a rectangular
grid; entropy is the discrete plug-in value H = -sum(p log p) in nats over
in-range counts. Out-of-range points are counted separately and excluded
from the normalization, never silently dropped.

All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import EmptyHistogram, TooFewPoints


class PhasePoint(NamedTuple):
    """(debt ratio, per-step normalized debt change) for one agent."""

    x: float
    y: float


# Default window: covers the bankruptcy wall at x = 1 plus a long
# negative-x (net creditor) tail.
DEFAULT_GRID_BOUNDS = (-10.0, 1.5, -1.0, 1.0)
DEFAULT_GRID_BINS = (100, 100)


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid extent must be non-empty")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("bin counts must be >= 1")

    @classmethod
    def default(cls) -> "GridSpec":
        return cls(*DEFAULT_GRID_BOUNDS, *DEFAULT_GRID_BINS)


@dataclass(frozen=True)
class PhaseHistogram:
    grid: GridSpec
    counts: np.ndarray  # shape (nx, ny), non-negative int64
    total: int
    out_of_range: int

    @property
    def in_range(self) -> int:
        return self.total - self.out_of_range


@dataclass(frozen=True)
class TailMetrics:
    rentier_fraction: float  # share of points with x < 0
    mean_x: float
    std_x: float
    skew_x: float


def bin_phase(points: Sequence[PhasePoint], grid: GridSpec) -> PhaseHistogram:
    """Bin points on the grid; bins are half-open [lo, hi) except the top
    edge of the last bin in each axis, which is inclusive."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    total = len(pts)
    if total == 0:
        counts = np.zeros((grid.nx, grid.ny), dtype=np.int64)
        return PhaseHistogram(grid, counts, 0, 0)
    x = pts[:, 0]
    y = pts[:, 1]
    in_range = (
        (x >= grid.x_min) & (x <= grid.x_max) & (y >= grid.y_min) & (y <= grid.y_max)
    )
    xi = x[in_range]
    yi = y[in_range]
    ix = np.floor(
        (xi - grid.x_min) / (grid.x_max - grid.x_min) * grid.nx
    ).astype(np.int64)
    iy = np.floor(
        (yi - grid.y_min) / (grid.y_max - grid.y_min) * grid.ny
    ).astype(np.int64)
    # Points exactly on the top edge fall in the last bin.
    np.clip(ix, 0, grid.nx - 1, out=ix)
    np.clip(iy, 0, grid.ny - 1, out=iy)
    flat = np.bincount(ix * grid.ny + iy, minlength=grid.nx * grid.ny)
    counts = flat.reshape(grid.nx, grid.ny).astype(np.int64)
    return PhaseHistogram(grid, counts, total, total - int(in_range.sum()))


def entropy(hist: PhaseHistogram) -> float:
    """H = -sum(p ln p) in nats over in-range bins, with 0 ln 0 := 0.

    Always in [0, ln(nx*ny)]; permutation-invariant in the bins and
    unchanged by adding empty bins.
    """
    n = hist.in_range
    if n < 1:
        raise EmptyHistogram("entropy needs at least one in-range point")
    c = hist.counts[hist.counts > 0].astype(float)
    p = c / n
    return float(-(p * np.log(p)).sum()) + 0.0


def tail_metrics(points: Sequence[PhasePoint]) -> TailMetrics:
    """Sample statistics of the debt-ratio marginal {x}."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 2:
        raise TooFewPoints(f"need >= 2 points, got {len(pts)}")
    x = pts[:, 0]
    mean = float(x.mean())
    centered = x - mean
    m2 = float((centered**2).mean())
    std = math.sqrt(m2)
    if m2 > 0.0:
        skew = float((centered**3).mean()) / m2**1.5
    else:
        skew = 0.0
    return TailMetrics(
        rentier_fraction=float((x < 0).sum()) / len(x),
        mean_x=mean,
        std_x=std,
        skew_x=skew,
    )


def write_histogram_csv(hist: PhaseHistogram, path) -> None:
    """Dump the count grid with a ``#key,value`` metadata header."""
    g = hist.grid
    with open(path, "w") as fh:
        fh.write(f"#x_min,{g.x_min!r}\n#x_max,{g.x_max!r}\n")
        fh.write(f"#y_min,{g.y_min!r}\n#y_max,{g.y_max!r}\n")
        fh.write(f"#nx,{g.nx}\n#ny,{g.ny}\n")
        fh.write(f"#total,{hist.total}\n#out_of_range,{hist.out_of_range}\n")
        for row in hist.counts:
            fh.write(",".join(str(int(c)) for c in row) + "\n")


def read_histogram_csv(path) -> PhaseHistogram:
    meta: dict[str, str] = {}
    rows: list[list[int]] = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, value = line[1:].split(",", 1)
                meta[key] = value
            else:
                rows.append([int(v) for v in line.split(",")])
    grid = GridSpec(
        float(meta["x_min"]),
        float(meta["x_max"]),
        float(meta["y_min"]),
        float(meta["y_max"]),
        int(meta["nx"]),
        int(meta["ny"]),
    )
    counts = np.asarray(rows, dtype=np.int64)
    if counts.shape != (grid.nx, grid.ny):
        raise ValueError("histogram grid shape does not match metadata")
    return PhaseHistogram(grid, counts, int(meta["total"]), int(meta["out_of_range"]))
