"""Predicates evaluated on finished trajectories."""
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from nirp_sfc.equilibrium import (
    EquilibriumError,
    collapse_limit,
    solve_interior_equilibrium,
)
from nirp_sfc.events import Termination
from nirp_sfc.integrator import Trajectory, infer_policy_rate
from nirp_sfc.model.params import FixedRate
from nirp_sfc.scenarios.base import Check, ExpectedOutcome

TAIL_FRACTION = 0.1


def distance_to_equilibrium(trajectory: Trajectory) -> float:
    """Sup-norm distance of the final (omega, lambda, ell) to the interior equilibrium.

    The equilibrium is solved at the policy rate the run settled on.
    """
    if isinstance(trajectory.params.policy_mode, FixedRate):
        policy_rate = float(trajectory.policy_rate[-1])
    else:
        policy_rate = infer_policy_rate(trajectory)

    try:
        equilibrium = solve_interior_equilibrium(trajectory.params, policy_rate)
    except EquilibriumError:
        return math.nan

    final = trajectory.states[-1, :3]
    target = np.array(
        [equilibrium.wage_share, equilibrium.employment, equilibrium.private_debt_ratio]
    )
    return float(np.max(np.abs(final - target)))


def deflation_gap(trajectory: Trajectory) -> float:
    """Final inflation minus the inflation of the collapse limit"""
    _, limit = collapse_limit(trajectory.params)
    return float(trajectory.inflation[-1] - limit)


METRICS: dict[str, Callable[[Trajectory], float]] = {
    "final_omega": lambda trajectory: float(trajectory.omega[-1]),
    "final_lambda": lambda trajectory: float(trajectory.employment[-1]),
    "final_ell": lambda trajectory: float(trajectory.private_debt[-1]),
    "final_rho": lambda trajectory: float(trajectory.target_rate[-1]),
    "final_r_g": lambda trajectory: float(trajectory.policy_rate[-1]),
    "final_b": lambda trajectory: float(trajectory.gov_debt[-1]),
    "final_inflation": lambda trajectory: float(trajectory.inflation[-1]),
    "final_lending_rate": lambda trajectory: float(trajectory.lending_rate[-1]),
    "final_capital_growth": lambda trajectory: float(trajectory.capital_growth[-1]),
    "min_policy_rate": lambda trajectory: float(np.min(trajectory.policy_rate)),
    "min_policy_rate_tail": lambda trajectory: float(
        np.min(trajectory.tail(TAIL_FRACTION).policy_rate)
    ),
    "distance_to_equilibrium": distance_to_equilibrium,
    "deflation_gap": deflation_gap,
}


class UnknownMetricError(Exception):
    def __init__(self, metric: str):
        self.metric = metric

        super().__init__(
            f"Unknown metric {metric}. Known metrics: {', '.join(sorted(METRICS))}"
        )


@dataclass(frozen=True)
class CheckResult:
    metric: str
    value: float
    lower: Optional[float]
    upper: Optional[float]
    passed: bool


@dataclass(frozen=True)
class OutcomeVerdict:
    expected_termination: Optional[Termination]
    termination: Termination
    checks: list[CheckResult]

    @property
    def termination_matches(self) -> bool:
        return (
            self.expected_termination is None
            or self.expected_termination == self.termination
        )

    @property
    def passed(self) -> bool:
        return self.termination_matches and all(check.passed for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "expected_termination": None
            if self.expected_termination is None
            else self.expected_termination.value,
            "termination": self.termination.value,
            "passed": self.passed,
            "checks": [
                {
                    "metric": check.metric,
                    "value": check.value,
                    "lower": check.lower,
                    "upper": check.upper,
                    "passed": check.passed,
                }
                for check in self.checks
            ],
        }


def evaluate_check(check: Check, trajectory: Trajectory) -> CheckResult:
    if check.metric not in METRICS:
        raise UnknownMetricError(check.metric)

    value = METRICS[check.metric](trajectory)
    passed = math.isfinite(value)
    if check.lower is not None:
        passed = passed and value >= check.lower
    if check.upper is not None:
        passed = passed and value <= check.upper

    return CheckResult(
        metric=check.metric,
        value=value,
        lower=check.lower,
        upper=check.upper,
        passed=passed,
    )


def evaluate_outcome(
    expected: ExpectedOutcome, trajectory: Trajectory
) -> OutcomeVerdict:
    return OutcomeVerdict(
        expected_termination=expected.termination,
        termination=trajectory.termination,
        checks=[evaluate_check(check, trajectory) for check in expected.checks],
    )
