"""Price grid with infinite walls and the well-bottom potential V(p).

The walls sit at center*(1 +/- half_width) and are never grid points: the
wave function vanishes there (Dirichlet) and that boundary condition is
absorbed into the finite-difference matrix, so only interior points are
sampled.  Potentials are gauge-fixed by shifting their minimum to zero;
Boltzmann weights and level spacings are unchanged by any constant shift
and a fixed gauge keeps outputs reproducible.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    CoverageError,
    DomainError,
    InsufficientDataError,
    OrderingError,
    ParseError,
)
from .marketdata import PriceSeries
from .units import NATURAL, UnitSystem  # noqa: F401  (re-exported: units live with the grid)


def _freeze(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform interior price grid between two Dirichlet walls."""

    center: float
    half_width: float
    n: int
    points: np.ndarray
    delta: float

    def __post_init__(self):
        if len(self.points) != self.n:
            raise DomainError(f"expected {self.n} points, got {len(self.points)}")
        _freeze(self.points)

    @property
    def wall_low(self) -> float:
        return self.center * (1.0 - self.half_width)

    @property
    def wall_high(self) -> float:
        return self.center * (1.0 + self.half_width)


def build_grid(center: float, half_width: float, n: int) -> Grid:
    """Place n interior points uniformly strictly between the walls.

    delta = 2*half_width*center/(n+1), p_i = center*(1-half_width) + i*delta
    for i = 1..n, so the walls themselves are excluded.
    """
    if not center > 0.0:
        raise DomainError(f"center must be > 0, got {center}")
    if not 0.0 < half_width < 1.0:
        raise DomainError(f"half_width must be in (0, 1), got {half_width}")
    if n < 2:
        raise DomainError(f"need at least 2 interior points, got {n}")
    delta = 2.0 * half_width * center / (n + 1)
    points = center * (1.0 - half_width) + delta * np.arange(1, n + 1, dtype=float)
    return Grid(center=center, half_width=half_width, n=n, points=points, delta=delta)


@dataclass(frozen=True, eq=False)
class PotentialWell:
    """Grid plus sampled potential values, min-shifted to exactly zero."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.grid.n:
            raise DomainError(
                f"potential has {len(self.values)} samples for {self.grid.n} grid points"
            )
        if not np.all(np.isfinite(self.values)):
            raise DomainError("potential values must all be finite")
        if self.grid.n and self.values.min() != 0.0:
            raise DomainError(
                "potential is not gauge-fixed (min must be exactly 0); "
                "use PotentialWell.from_samples"
            )
        _freeze(self.values)

    @classmethod
    def from_samples(cls, grid: Grid, values: np.ndarray) -> "PotentialWell":
        values = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise DomainError("potential values must all be finite")
        return cls(grid=grid, values=values - values.min())


def flat_well(grid: Grid) -> PotentialWell:
    """The infinite square well: V identically zero on the grid."""
    return PotentialWell(grid=grid, values=np.zeros(grid.n))


def load_potential(
    table: Sequence[tuple[float, float]], grid: Grid
) -> PotentialWell:
    """Sample a tabulated potential onto the grid by linear interpolation.

    The table must span the whole grid range; values are min-shifted
    afterwards so the gauge invariant holds regardless of the table's
    offset.
    """
    if len(table) < 2:
        raise InsufficientDataError("potential table needs at least 2 points")
    prices = np.array([p for p, _ in table], dtype=float)
    values = np.array([v for _, v in table], dtype=float)
    if not np.all(np.diff(prices) > 0.0):
        raise OrderingError("potential table prices must be strictly increasing")
    if not np.all(np.isfinite(values)):
        raise DomainError("potential table values must all be finite")
    if prices[0] > grid.points[0] or prices[-1] < grid.points[-1]:
        raise CoverageError(
            f"potential table spans [{prices[0]}, {prices[-1]}] but the grid "
            f"needs [{grid.points[0]}, {grid.points[-1]}]"
        )
    sampled = np.interp(grid.points, prices, values)
    return PotentialWell.from_samples(grid, sampled)


def reference_potential(
    series: PriceSeries, grid: Grid, bandwidth: float, scale: float
) -> PotentialWell:
    """Placeholder potential estimator based on visit frequency.

    V(p) = scale * (1 - f(p)/max f) where f is a Gaussian-kernel estimate
    of how often recent closes visited each price, so frequently traded
    prices become valleys and rarely traded prices become ridges.  This is
    a stand-in for a proper statistically estimated potential, which is
    out of scope here; it exists so the pipeline can run end to end
    without an external potential file.
    """
    if not bandwidth > 0.0:
        raise DomainError(f"bandwidth must be > 0, got {bandwidth}")
    if not scale > 0.0:
        raise DomainError(f"scale must be > 0, got {scale}")
    if len(series) < 1:
        raise InsufficientDataError("price series is empty")
    closes = series.closes
    z = (grid.points[:, None] - closes[None, :]) / bandwidth
    frequency = np.exp(-0.5 * z**2).sum(axis=1)
    values = scale * (1.0 - frequency / frequency.max())
    return PotentialWell.from_samples(grid, values)


def parse_potential_csv(text: str) -> tuple[tuple[float, float], ...]:
    """Parse a two-column ``price,potential`` CSV (header required)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input, expected a header row", 1) from None
    names = [h.strip().lower() for h in header]
    if names[:2] != ["price", "potential"]:
        raise ParseError(
            f"expected header 'price,potential', got {','.join(names)!r}", 1
        )
    table: list[tuple[float, float]] = []
    for record in reader:
        line = reader.line_num
        if not record or all(not field.strip() for field in record):
            continue
        if len(record) < 2:
            raise ParseError(f"expected 2 fields, got {len(record)}", line)
        try:
            price = float(record[0])
            value = float(record[1])
        except ValueError:
            raise ParseError(f"not a numeric row: {record!r}", line) from None
        if not (math.isfinite(price) and math.isfinite(value)):
            raise ParseError(f"non-finite value in row: {record!r}", line)
        if table and price <= table[-1][0]:
            raise OrderingError(
                f"line {line}: potential prices must be strictly increasing"
            )
        table.append((price, value))
    if len(table) < 2:
        raise InsufficientDataError("potential table needs at least 2 rows")
    return tuple(table)
