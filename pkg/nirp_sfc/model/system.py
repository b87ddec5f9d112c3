"""Right-hand sides of the model's differential equations.

The joint state vector is laid out as
``(omega, lambda, ell, rho, r_g, b, p, Y)``; the first five coordinates are
the core system, the last three are auxiliary and never feed back into it.
"""
import math

import numpy as np

from nirp_sfc.model.errors import ContractViolation, SingularStateError
from nirp_sfc.model.functions import investment, inflation, phillips
from nirp_sfc.model.params import FixedRate, ModelParams
from nirp_sfc.model.state import AuxState, CoreState, DerivedObservables, Levels

CORE_DIMENSION = 5
JOINT_DIMENSION = 8


def _core_derivatives(
    omega: float,
    lam: float,
    ell: float,
    rho: float,
    r_g: float,
    params: ModelParams,
) -> tuple[float, float, float, float, float, float, float]:
    """Core derivatives plus the inflation and capital growth they were built from"""
    if lam >= 1:
        raise SingularStateError(lam)

    lending = params.lending_rate(r_g)
    profit = 1 - omega - params.tax_share - lending * ell
    kappa = investment(profit, params)
    growth = kappa / params.capital_output - params.depreciation
    price_growth = inflation(omega, params)
    gap = growth - params.natural_growth

    d_omega = omega * (
        phillips(lam, params)
        - params.productivity_growth
        - (1 - params.money_illusion) * price_growth
    )
    d_lambda = lam * gap
    d_ell = (
        ell * (lending - growth - price_growth) + omega + params.tax_share + kappa - 1
    )

    if isinstance(params.policy_mode, FixedRate):
        d_rho = 0.0
        d_r_g = 0.0
    else:
        d_rho = params.target_adjust_speed * gap
        d_r_g = params.rate_adjust_speed * (rho - r_g)
        floor = params.policy_mode.floor
        if floor is not None and r_g <= floor:
            d_r_g = max(d_r_g, 0.0)

    return d_omega, d_lambda, d_ell, d_rho, d_r_g, price_growth, growth


def core_rhs(state: CoreState, params: ModelParams) -> CoreState:
    """Time derivative of the core state.

    :raises SingularStateError: At or above full employment
    :raises ContractViolation: On non-finite input
    """
    values = (
        state.wage_share,
        state.employment,
        state.private_debt_ratio,
        state.target_rate,
        state.policy_rate,
    )
    if not all(math.isfinite(value) for value in values):
        raise ContractViolation(f"non-finite core state {state}")

    return CoreState(*_core_derivatives(*values, params)[:CORE_DIMENSION])


def aux_rhs(core: CoreState, aux: AuxState, params: ModelParams) -> AuxState:
    """Time derivative of the government debt ratio, price level and real output"""
    if aux.price_level <= 0 or aux.real_output <= 0:
        raise ContractViolation(f"price level and output must be positive: {aux}")

    observables = derived(core, params)

    return AuxState(
        gov_debt_ratio=_gov_debt_derivative(core, aux, observables, params),
        price_level=aux.price_level * observables.inflation,
        real_output=aux.real_output * observables.capital_growth,
    )


def _gov_debt_derivative(
    core: CoreState,
    aux: AuxState,
    observables: DerivedObservables,
    params: ModelParams,
) -> float:
    return (params.gov_spend_share - params.tax_share) + aux.gov_debt_ratio * (
        core.policy_rate - observables.inflation - observables.capital_growth
    )


def joint_rhs(y: np.ndarray, params: ModelParams) -> np.ndarray:
    """Derivative of the joint eight-dimensional state vector"""
    omega, lam, ell, rho, r_g, b, p, output = y
    (
        d_omega,
        d_lambda,
        d_ell,
        d_rho,
        d_r_g,
        price_growth,
        growth,
    ) = _core_derivatives(omega, lam, ell, rho, r_g, params)

    d_b = (params.gov_spend_share - params.tax_share) + b * (
        r_g - price_growth - growth
    )

    return np.array(
        [
            d_omega,
            d_lambda,
            d_ell,
            d_rho,
            d_r_g,
            d_b,
            p * price_growth,
            output * growth,
        ]
    )


def derived(core: CoreState, params: ModelParams) -> DerivedObservables:
    lending = params.lending_rate(core.policy_rate)
    profit = (
        1
        - core.wage_share
        - params.tax_share
        - lending * core.private_debt_ratio
    )

    return DerivedObservables(
        profit_share=profit,
        inflation=inflation(core.wage_share, params),
        lending_rate=lending,
        deposit_rate=core.policy_rate,
        capital_growth=investment(profit, params) / params.capital_output
        - params.depreciation,
    )


def initial_labor_force(
    core: CoreState, aux: AuxState, productivity: float = 1.0
) -> float:
    """Labour force that makes the initial levels match the initial employment rate"""
    if core.employment <= 0:
        raise ContractViolation("levels are undefined without employment")

    return aux.real_output / (productivity * core.employment)


def levels(
    t: float,
    core: CoreState,
    aux: AuxState,
    params: ModelParams,
    labor_force_0: float,
    productivity_0: float = 1.0,
) -> Levels:
    productivity = productivity_0 * math.exp(params.productivity_growth * t)
    nominal_output = aux.price_level * aux.real_output
    loans = core.private_debt_ratio * nominal_output

    return Levels(
        productivity=productivity,
        labor_force=labor_force_0 * math.exp(params.labor_growth * t),
        employed=aux.real_output / productivity,
        nominal_wage=core.wage_share * aux.price_level * productivity,
        capital=params.capital_output * aux.real_output,
        loans=loans,
        gov_debt=aux.gov_debt_ratio * nominal_output,
        deposits=(1 - params.capital_ratio_banks) * loans,
        nominal_output=nominal_output,
    )
