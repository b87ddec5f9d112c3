from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from nirp_sfc.rates import (
    InsufficientDataError,
    RatesFormatError,
    RatesSeries,
    rates_check,
    read_rates_csv,
)
from nirp_sfc.test_helpers import generate_rates_csv, generate_rates_frame


@pytest.fixture
def rates_file(tmp_path: Path):
    def write(text: str) -> Path:
        path = tmp_path / "rates.csv"
        path.write_text(text)
        return path

    return write


class TestReadRates:
    def test_dates_become_the_index(self, rates_file):
        series = read_rates_csv(rates_file(generate_rates_csv(months=30)))

        assert len(series) == 30
        assert isinstance(series.frame.index, pd.DatetimeIndex)
        assert series.frame.index[0] == pd.Timestamp("2015-01-01")

    def test_missing_values_are_kept_but_not_complete(self, rates_file):
        frame = generate_rates_frame(months=30).astype(str)
        frame.loc[3, "deposit_rate"] = ""
        frame.loc[4, "lending_rate"] = "NA"

        series = read_rates_csv(rates_file(generate_rates_csv(frame)))

        assert len(series) == 30
        assert len(series.complete) == 28
        assert np.isnan(series.frame["deposit_rate"].iloc[3])

    def test_dates_must_increase(self, rates_file):
        frame = generate_rates_frame(months=30)
        frame.loc[5, "date"] = frame.loc[4, "date"]

        with pytest.raises(RatesFormatError) as error:
            read_rates_csv(rates_file(generate_rates_csv(frame)))

        assert error.value.line == 7

    def test_bad_number_reports_its_line(self, rates_file):
        frame = generate_rates_frame(months=30).astype(str)
        frame.loc[2, "policy_rate"] = "two percent"

        with pytest.raises(RatesFormatError) as error:
            read_rates_csv(rates_file(generate_rates_csv(frame)))

        assert error.value.line == 4
        assert "policy_rate" in str(error.value)

    def test_invalid_date(self, rates_file):
        frame = generate_rates_frame(months=30)
        frame.loc[0, "date"] = "yesterday"

        with pytest.raises(RatesFormatError) as error:
            read_rates_csv(rates_file(generate_rates_csv(frame)))

        assert error.value.line == 2

    def test_missing_column(self):
        frame = generate_rates_frame().drop(columns=["lending_rate"])

        with pytest.raises(RatesFormatError, match="lending_rate"):
            RatesSeries.from_frame(frame)


class TestRatesCheck:
    def test_constant_spreads(self):
        series = RatesSeries.from_frame(generate_rates_frame(lending_spread=0.03))

        report = rates_check(series)

        assert report.observations == 36
        assert report.lending.mean == pytest.approx(0.03)
        assert report.lending.std == pytest.approx(0.0, abs=1e-15)
        assert report.lending.fraction_positive == 1.0
        assert report.deposit.mean == pytest.approx(0.0, abs=1e-15)
        assert report.passed
        assert report.to_dict()["verdict"] == "PASS"

    def test_deposits_above_lending_fail(self):
        series = RatesSeries.from_frame(
            generate_rates_frame(lending_spread=0.01, deposit_spread=0.02)
        )

        report = rates_check(series)

        assert not report.passed
        assert report.to_dict()["verdict"] == "FAIL"

    def test_deposits_far_below_policy_fail(self):
        series = RatesSeries.from_frame(
            generate_rates_frame(lending_spread=0.01, deposit_spread=-0.02)
        )

        report = rates_check(series)

        assert report.lending.mean > 0
        assert not report.passed

    def test_negative_policy_rates(self):
        """Lending spreads stay positive when the policy rate goes below zero."""
        policy = np.linspace(0.01, -0.005, 36)
        series = RatesSeries.from_frame(
            generate_rates_frame(policy=policy, deposit_spread=0.005)
        )

        report = rates_check(series)

        assert report.passed
        assert report.deposit.mean == pytest.approx(0.005)

    def test_too_few_complete_rows(self):
        series = RatesSeries.from_frame(generate_rates_frame(months=23))

        with pytest.raises(InsufficientDataError) as error:
            rates_check(series)

        assert error.value.complete_rows == 23
