"""The calibrated runs shipped with the package.

``fig2`` and ``fig3`` switch the policy rule off and charge a constant
lending rate. ``fig4`` to ``fig6`` run the active rule with a public sector
spending a fifth of output, and differ only in the initial private debt.
"""
from typing import Callable

from nirp_sfc.events import Termination
from nirp_sfc.integrator import SolverSettings
from nirp_sfc.model.params import ActiveRule, FixedRate, ModelParams
from nirp_sfc.model.state import AuxState, CoreState
from nirp_sfc.scenarios.base import Check, ExpectedOutcome, Scenario, ScenarioNotFound

EQUILIBRIUM_DISTANCE = 1e-3

FIXED_RATE_PARAMS = ModelParams(policy_mode=FixedRate(rate=0.03))

ACTIVE_RULE_PARAMS = ModelParams(
    gov_spend_share=0.2,
    tax_share=0.0,
    loan_spread=0.03,
    rate_adjust_speed=0.1,
    target_adjust_speed=0.2,
    policy_mode=ActiveRule(),
)


def _initial(private_debt_ratio: float) -> CoreState:
    return CoreState(
        wage_share=0.8,
        employment=0.9,
        private_debt_ratio=private_debt_ratio,
        target_rate=0.0,
        policy_rate=0.0,
    )


def fig2() -> Scenario:
    return Scenario(
        name="fig2",
        description="Constant lending rate, low initial debt: damped cycles",
        params=FIXED_RATE_PARAMS,
        initial_core=_initial(0.6),
        initial_aux=AuxState(gov_debt_ratio=0.0),
        settings=SolverSettings(horizon=300.0),
        expected_outcome=ExpectedOutcome(
            termination=Termination.CONVERGED,
            checks=(
                Check("distance_to_equilibrium", upper=EQUILIBRIUM_DISTANCE),
                Check("final_inflation", lower=0.0),
            ),
        ),
    )


def fig3() -> Scenario:
    return Scenario(
        name="fig3",
        description="Constant lending rate, high initial debt: debt deflation",
        params=FIXED_RATE_PARAMS,
        initial_core=_initial(6.0),
        initial_aux=AuxState(gov_debt_ratio=0.0),
        settings=SolverSettings(horizon=150.0),
        expected_outcome=ExpectedOutcome(
            termination=Termination.DEBT_BLOWUP,
            checks=(
                Check("final_lambda", upper=0.9),
                Check("final_capital_growth", upper=0.0),
                Check("final_inflation", upper=0.0),
                Check("deflation_gap", lower=0.0),
            ),
        ),
    )


def fig4() -> Scenario:
    return Scenario(
        name="fig4",
        description="Active rule, low initial debt: rates settle above zero",
        params=ACTIVE_RULE_PARAMS,
        initial_core=_initial(0.6),
        initial_aux=AuxState(gov_debt_ratio=0.4),
        settings=SolverSettings(horizon=300.0),
        expected_outcome=ExpectedOutcome(
            termination=Termination.CONVERGED,
            checks=(
                Check("distance_to_equilibrium", upper=EQUILIBRIUM_DISTANCE),
                Check("final_rho", lower=0.010, upper=0.016),
                Check("final_r_g", lower=0.010, upper=0.016),
                Check("final_lending_rate", lower=0.040, upper=0.046),
                Check("final_b", lower=5.0, upper=5.6),
            ),
        ),
    )


def _negative_rates_episode(
    name: str,
    description: str,
    private_debt_ratio: float,
    expected_outcome: ExpectedOutcome,
    params: ModelParams = ACTIVE_RULE_PARAMS,
) -> Scenario:
    return Scenario(
        name=name,
        description=description,
        params=params,
        initial_core=_initial(private_debt_ratio),
        initial_aux=AuxState(gov_debt_ratio=0.4),
        settings=SolverSettings(horizon=800.0),
        expected_outcome=expected_outcome,
    )


def fig5() -> Scenario:
    return _negative_rates_episode(
        "fig5",
        "Active rule, high initial debt: a spell of negative rates",
        6.0,
        ExpectedOutcome(
            termination=Termination.CONVERGED,
            checks=(
                Check("min_policy_rate", lower=-0.025, upper=-0.005),
                Check("min_policy_rate_tail", lower=1e-9),
            ),
        ),
    )


def fig6() -> Scenario:
    return _negative_rates_episode(
        "fig6",
        "Active rule, very high initial debt: deeper negative rates",
        8.0,
        ExpectedOutcome(
            termination=Termination.CONVERGED,
            checks=(
                Check("min_policy_rate", lower=-0.030, upper=-0.012),
                Check("min_policy_rate_tail", lower=1e-9),
            ),
        ),
    )


FLOOR = -0.005


def fig6_floor() -> Scenario:
    """As fig6 with a floor under the policy rate.

    The check allows the rate 1e-4 below the floor for a step that crosses it
    before the clamp takes hold.
    """
    return _negative_rates_episode(
        "fig6_floor",
        "As fig6 with the policy rate held above a floor",
        8.0,
        ExpectedOutcome(checks=(Check("min_policy_rate", lower=FLOOR - 1e-4),)),
        params=ACTIVE_RULE_PARAMS.with_overrides(policy_mode=ActiveRule(floor=FLOOR)),
    )


PRESETS: dict[str, Callable[[], Scenario]] = {
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig6_floor": fig6_floor,
}


def preset(name: str) -> Scenario:
    """Build a shipped scenario by name

    :raises ScenarioNotFound: If there is no preset with that name
    """
    try:
        return PRESETS[name]()
    except KeyError:
        raise ScenarioNotFound(name, PRESETS)
