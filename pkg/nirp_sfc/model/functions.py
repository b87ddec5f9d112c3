"""Behavioural functions of the model.

All functions are pure and operate on plain floats, so they are safe to call
from any number of workers.
"""
import math

from nirp_sfc.model.errors import DomainError
from nirp_sfc.model.params import ModelParams
from nirp_sfc.model.state import CoreState


def phillips(employment: float, params: ModelParams) -> float:
    """Wage growth demanded at a given employment rate.

    :raises DomainError: At or above full employment, where the curve has its pole
    """
    if employment >= 1:
        raise DomainError("phillips", employment, "full employment is a pole")

    return params.phillips_const + params.phillips_coef / (1 - employment) ** 2


def phillips_inverse(wage_growth: float, params: ModelParams) -> float:
    """Employment rate at which the Phillips curve returns `wage_growth`.

    :raises DomainError: If no employment rate attains this wage growth
    """
    gap = wage_growth - params.phillips_const
    if gap <= 0:
        raise DomainError(
            "phillips_inverse", wage_growth, "must exceed the Phillips constant"
        )

    return 1 - math.sqrt(params.phillips_coef / gap)


def investment(profit_share: float, params: ModelParams) -> float:
    """Investment as a share of output. Left unbounded above on purpose."""
    return params.inv_const + math.exp(
        params.inv_shift + params.inv_slope * profit_share
    )


def investment_inverse(investment_share: float, params: ModelParams) -> float:
    """Profit share at which firms invest `investment_share` of output.

    :raises DomainError: At or below the infimum of the investment function
    """
    gap = investment_share - params.inv_const
    if gap <= 0:
        raise DomainError(
            "investment_inverse", investment_share, "must exceed the investment floor"
        )

    return (math.log(gap) - params.inv_shift) / params.inv_slope


def inflation(wage_share: float, params: ModelParams) -> float:
    """Price inflation from mark-up pricing over unit labour costs"""
    return params.inflation_relax * (params.markup * wage_share - 1)


def wage_growth(state: CoreState, params: ModelParams) -> float:
    """Growth rate of the nominal wage rate"""
    return phillips(state.employment, params) + params.money_illusion * inflation(
        state.wage_share, params
    )


def profit_share(state: CoreState, params: ModelParams) -> float:
    """Pre-depreciation profits over nominal output"""
    return (
        1
        - state.wage_share
        - params.tax_share
        - params.lending_rate(state.policy_rate) * state.private_debt_ratio
    )


def capital_growth(profit: float, params: ModelParams) -> float:
    return investment(profit, params) / params.capital_output - params.depreciation
