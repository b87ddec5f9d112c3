"""Historical policy, deposit and lending rates.

Only a stylized-fact check is done here: lending rates should sit above the
policy rate and deposit rates should track it more closely.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Union

import pandas as pd

RATE_COLUMNS = ("policy_rate", "deposit_rate", "lending_rate")
MINIMUM_OBSERVATIONS = 24

logger = logging.getLogger(__name__)


class RatesFormatError(Exception):
    """Raised when a rates file is malformed"""

    line: int
    """Line of the file the problem is on, 0 when it concerns the whole file"""

    def __init__(self, line: int, reason: str):
        self.line = line

        location = f"line {line}: " if line else ""
        super().__init__(f"{location}{reason}")


class InsufficientDataError(Exception):
    def __init__(self, complete_rows: int):
        self.complete_rows = complete_rows

        super().__init__(
            f"Need at least {MINIMUM_OBSERVATIONS} rows with all three rates, "
            f"got {complete_rows}"
        )


@dataclass(frozen=True, eq=False)
class RatesSeries:
    """Dated observations indexed by date. Missing rates are NaN."""

    frame: pd.DataFrame

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def complete(self) -> pd.DataFrame:
        return self.frame.dropna(subset=list(RATE_COLUMNS))

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "RatesSeries":
        """Validate a frame with a ``date`` column and the three rate columns

        :raises RatesFormatError: With the offending line of the source file
        """
        missing = {"date", *RATE_COLUMNS} - set(frame.columns)
        if missing:
            raise RatesFormatError(0, f"missing columns {', '.join(sorted(missing))}")

        # data row k sits on line k + 2 of the file, after the header
        dates = pd.to_datetime(frame["date"], format="ISO8601", errors="coerce")
        for position, value in enumerate(dates):
            if pd.isna(value):
                raise RatesFormatError(
                    position + 2, f"invalid date {frame['date'].iloc[position]!r}"
                )

        steps = dates.diff().iloc[1:]
        if (steps <= pd.Timedelta(0)).any():
            position = int((steps <= pd.Timedelta(0)).to_numpy().argmax()) + 1
            raise RatesFormatError(position + 2, "dates must be strictly increasing")

        rates = pd.DataFrame(index=pd.DatetimeIndex(dates, name="date"))
        for column in RATE_COLUMNS:
            raw = frame[column]
            values = pd.to_numeric(raw, errors="coerce")
            bad = values.isna() & raw.notna()
            if bad.any():
                position = int(bad.to_numpy().argmax())
                raise RatesFormatError(
                    position + 2, f"{column} is not a number: {raw.iloc[position]!r}"
                )
            if values.abs().eq(float("inf")).any():
                position = int(values.abs().eq(float("inf")).to_numpy().argmax())
                raise RatesFormatError(position + 2, f"{column} is not finite")
            rates[column] = values.to_numpy(dtype=float)

        return cls(frame=rates)


def read_rates_csv(path: Union[str, Path]) -> RatesSeries:
    """Parse a rates CSV with columns date, policy_rate, deposit_rate, lending_rate

    Empty cells and ``NA`` mark missing values.
    """
    try:
        frame = pd.read_csv(
            path, dtype=str, keep_default_na=False, na_values=["", "NA"]
        )
    except FileNotFoundError:
        raise RatesFormatError(0, f"no such file {path}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise RatesFormatError(0, str(e)) from e

    series = RatesSeries.from_frame(frame)
    incomplete = len(series) - len(series.complete)
    if incomplete:
        logger.warning("Skipping %d rows with missing rates", incomplete)

    return series


@dataclass(frozen=True)
class SpreadStatistics:
    mean: float
    std: float
    fraction_positive: float


@dataclass(frozen=True)
class SpreadReport:
    observations: int
    lending: SpreadStatistics
    deposit: SpreadStatistics

    @property
    def passed(self) -> bool:
        return self.lending.mean > 0 and abs(self.deposit.mean) < self.lending.mean

    def to_dict(self) -> dict[str, Any]:
        return {
            "observations": self.observations,
            "lending_spread": vars(self.lending),
            "deposit_spread": vars(self.deposit),
            "verdict": "PASS" if self.passed else "FAIL",
        }


def _statistics(spread: pd.Series) -> SpreadStatistics:
    return SpreadStatistics(
        mean=float(spread.mean()),
        std=float(spread.std(ddof=0)),
        fraction_positive=float((spread > 0).mean()),
    )


def rates_check(series: RatesSeries) -> SpreadReport:
    """Spreads of the lending and deposit rates over the policy rate

    :raises InsufficientDataError: If fewer than 24 rows have all three rates
    """
    complete = series.complete
    if len(complete) < MINIMUM_OBSERVATIONS:
        raise InsufficientDataError(len(complete))

    return SpreadReport(
        observations=len(complete),
        lending=_statistics(complete["lending_rate"] - complete["policy_rate"]),
        deposit=_statistics(complete["deposit_rate"] - complete["policy_rate"]),
    )
