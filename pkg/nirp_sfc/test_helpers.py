import io
from typing import Any, Optional, Union

import numpy as np
import pandas as pd

from nirp_sfc.types import (
    ExpectedOutcomeDocument,
    InitialDocument,
    ScenarioDocument,
    SweepAxisDocument,
    SweepDocument,
)


def generate_rates_frame(
    months: int = 36,
    start: str = "2015-01-01",
    policy: Optional[np.ndarray] = None,
    lending_spread: float = 0.03,
    deposit_spread: float = 0.0,
) -> pd.DataFrame:
    """A monthly rate series with constant spreads over the policy rate"""
    if policy is None:
        policy = np.linspace(0.0025, 0.02, months)

    return pd.DataFrame(
        {
            "date": pd.date_range(start, periods=months, freq="MS").strftime(
                "%Y-%m-%d"
            ),
            "policy_rate": policy,
            "deposit_rate": policy + deposit_spread,
            "lending_rate": policy + lending_spread,
        }
    )


def generate_rates_csv(frame: Optional[pd.DataFrame] = None, **kwargs: Any) -> str:
    """CSV text of a rate series, generated when no frame is given"""
    if frame is None:
        frame = generate_rates_frame(**kwargs)

    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def generate_scenario_document(
    name: str = "test-scenario",
    params: Optional[dict[str, Any]] = None,
    initial: Optional[InitialDocument] = None,
    settings: Optional[dict[str, Any]] = None,
    expected_outcome: Optional[ExpectedOutcomeDocument] = None,
) -> ScenarioDocument:
    """A short fixed-rate run starting near the baseline cycle"""
    return {
        "name": name,
        "version": 1,
        "description": "",
        "params": params
        if params is not None
        else {"policy_mode": {"kind": "fixed_rate", "rate": 0.03}},
        "initial": initial
        if initial is not None
        else {
            "omega": 0.8,
            "lambda": 0.9,
            "ell": 0.6,
            "rho": 0.0,
            "r_g": 0.0,
            "b": 0.0,
        },
        "settings": settings if settings is not None else {"horizon": 20.0},
        "expected_outcome": expected_outcome
        if expected_outcome is not None
        else {"termination": "HorizonReached", "checks": []},
    }


def generate_sweep_document(
    base: Union[str, ScenarioDocument] = "fig2",
    axes: Optional[list[SweepAxisDocument]] = None,
) -> SweepDocument:
    return {
        "base": base,
        "axes": axes
        if axes is not None
        else [{"name": "initial.ell", "values": [0.6]}],
    }
