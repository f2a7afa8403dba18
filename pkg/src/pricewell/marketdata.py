"""Price/volume history ingestion, log returns, market temperature, walls.

The market temperature is the volume-weighted mean squared daily return
divided by the Boltzmann factor of the unit system: T = <v * r^2> / K.
The fluctuation limit is the empirical confidence quantile of the largest
absolute price excursion seen over a sliding horizon window; it fixes the
half-width of the potential well.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InsufficientDataError,
    OrderingError,
    ParseError,
)
from .units import NATURAL, UnitSystem

REQUIRED_COLUMNS = ("date", "close", "volume")


@dataclass(frozen=True)
class PriceRow:
    date: dt.date
    close: float
    volume: float


@dataclass(frozen=True)
class PriceSeries:
    """Dated close prices and daily traded volumes for one instrument.

    Dates are strictly increasing, closes are positive, volumes are
    non-negative (thousand-currency units).
    """

    ticker: str
    rows: tuple[PriceRow, ...]

    def __post_init__(self):
        if not self.rows:
            raise InsufficientDataError("price series has no rows")
        for prev, cur in zip(self.rows, self.rows[1:]):
            if cur.date <= prev.date:
                raise OrderingError(
                    f"dates must be strictly increasing: {prev.date} then {cur.date}"
                )
        for row in self.rows:
            if not row.close > 0.0:
                raise DomainError(f"close must be > 0, got {row.close} on {row.date}")
            if row.volume < 0.0:
                raise DomainError(f"volume must be >= 0, got {row.volume} on {row.date}")

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def dates(self) -> tuple[dt.date, ...]:
        return tuple(row.date for row in self.rows)

    @property
    def closes(self) -> np.ndarray:
        return np.array([row.close for row in self.rows], dtype=float)

    @property
    def volumes(self) -> np.ndarray:
        return np.array([row.volume for row in self.rows], dtype=float)

    @property
    def last_close(self) -> float:
        return self.rows[-1].close


@dataclass(frozen=True)
class ReturnRow:
    date: dt.date
    value: float


@dataclass(frozen=True)
class ReturnSeries:
    """Daily log returns; one fewer row than the source price series."""

    ticker: str
    rows: tuple[ReturnRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def dates(self) -> tuple[dt.date, ...]:
        return tuple(row.date for row in self.rows)

    @property
    def values(self) -> np.ndarray:
        return np.array([row.value for row in self.rows], dtype=float)


@dataclass(frozen=True)
class Temperature:
    """Market temperature (energy per Boltzmann constant) and its window."""

    value: float
    window: int

    def __post_init__(self):
        if self.value < 0.0:
            raise DomainError(f"temperature must be >= 0, got {self.value}")


def _parse_float(text: str, column: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"column '{column}' is not a number: {text!r}", line) from None
    if not math.isfinite(value):
        raise ParseError(f"column '{column}' is not finite: {text!r}", line)
    return value


def parse_price_csv(text: str, ticker: str = "") -> PriceSeries:
    """Parse comma-separated price history into a validated PriceSeries.

    The header must contain at least ``date`` (ISO-8601 day), ``close`` and
    ``volume`` columns; any extra columns (open, high, low, ...) are ignored.
    Rows must already be sorted by date: an out-of-order file is an error,
    not something to fix silently.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input, expected a header row", 1) from None

    names = [h.strip().lower() for h in header]
    try:
        idx = {name: names.index(name) for name in REQUIRED_COLUMNS}
    except ValueError:
        missing = [name for name in REQUIRED_COLUMNS if name not in names]
        raise ParseError(f"header is missing column(s): {', '.join(missing)}", 1) from None

    rows: list[PriceRow] = []
    lines: list[int] = []
    for record in reader:
        line = reader.line_num
        if not record or all(not field.strip() for field in record):
            continue
        if len(record) < len(names):
            raise ParseError(
                f"expected {len(names)} fields, got {len(record)}", line
            )
        try:
            date = dt.date.fromisoformat(record[idx["date"]].strip())
        except ValueError:
            raise ParseError(
                f"column 'date' is not an ISO-8601 day: {record[idx['date']]!r}", line
            ) from None
        close = _parse_float(record[idx["close"]].strip(), "close", line)
        volume = _parse_float(record[idx["volume"]].strip(), "volume", line)
        if rows and date <= rows[-1].date:
            raise OrderingError(
                f"line {line}: dates must be strictly increasing: "
                f"{rows[-1].date} then {date}"
            )
        if not close > 0.0:
            raise DomainError(f"line {line}: close must be > 0, got {close}")
        if volume < 0.0:
            raise DomainError(f"line {line}: volume must be >= 0, got {volume}")
        rows.append(PriceRow(date, close, volume))
        lines.append(line)

    if not rows:
        raise InsufficientDataError("no data rows after the header")
    return PriceSeries(ticker=ticker, rows=tuple(rows))


def log_returns(series: PriceSeries) -> ReturnSeries:
    """Daily log returns ln(p_{i+1} / p_i), dated by the later day."""
    if len(series) < 2:
        raise InsufficientDataError("need at least 2 rows to compute returns")
    closes = series.closes
    values = np.log(closes[1:] / closes[:-1])
    rows = tuple(
        ReturnRow(date=row.date, value=float(v))
        for row, v in zip(series.rows[1:], values)
    )
    return ReturnSeries(ticker=series.ticker, rows=rows)


def market_temperature(
    returns: ReturnSeries,
    series: PriceSeries,
    window: int,
    units: UnitSystem = NATURAL,
) -> Temperature:
    """Mean of v_i * r_i^2 over the last ``window`` days, divided by K.

    Each return is paired with the traded volume of the later day of its
    price pair (the volume that carried the move).
    """
    if window < 1:
        raise InsufficientDataError("temperature window must contain at least 1 day")
    if window > len(returns):
        raise InsufficientDataError(
            f"window of {window} days exceeds the {len(returns)} available returns"
        )
    volume_by_date = {row.date: row.volume for row in series.rows}
    tail = returns.rows[-window:]
    try:
        volumes = np.array([volume_by_date[row.date] for row in tail], dtype=float)
    except KeyError as exc:
        raise DomainError(f"return date {exc.args[0]} is not present in the price series")
    values = np.array([row.value for row in tail], dtype=float)
    value = float(np.mean(volumes * values**2) / units.boltzmann)
    return Temperature(value=value, window=window)


def fluctuation_limit(series: PriceSeries, horizon_days: int, confidence: float) -> float:
    """Confidence quantile of the maximum absolute move over a horizon.

    For every sliding window the statistic is
    max_{1<=j<=horizon} |p_{s+j}/p_s - 1|; the result is the empirical
    ``confidence``-quantile (linear interpolation) of those maxima and is
    used as the well's wall half-width.
    """
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must be in (0, 1), got {confidence}")
    if horizon_days < 1:
        raise DomainError(f"horizon must be >= 1 day, got {horizon_days}")
    if len(series) < 2 * horizon_days:
        raise InsufficientDataError(
            f"need at least {2 * horizon_days} rows for a {horizon_days}-day horizon, "
            f"got {len(series)}"
        )
    closes = series.closes
    windows = np.lib.stride_tricks.sliding_window_view(closes, horizon_days + 1)
    excursions = np.abs(windows[:, 1:] / windows[:, :1] - 1.0)
    maxima = excursions.max(axis=1)
    return float(np.quantile(maxima, confidence))
