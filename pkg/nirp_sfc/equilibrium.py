"""Interior equilibrium of the core system and its local stability.

The wage share and the private debt ratio at the interior equilibrium are
mutually implicit through inflation, so the pair is found by bracketed root
finding in the wage share alone.
"""
import enum
import math
from dataclasses import dataclass, replace
from typing import Any, Optional

import numpy as np
from scipy.optimize import brentq

from nirp_sfc.model.errors import ContractViolation, DomainError
from nirp_sfc.model.functions import (
    inflation,
    investment,
    investment_inverse,
    phillips,
    phillips_inverse,
)
from nirp_sfc.model.params import FixedRate, ModelParams
from nirp_sfc.model.state import CoreState
from nirp_sfc.model.system import CORE_DIMENSION, core_rhs

ROOT_TOLERANCE = 1e-15
SCAN_POINTS = 4000
MARGINAL_TOLERANCE = 1e-7
RESIDUAL_TOLERANCE = 1e-8


class EquilibriumError(Exception):
    """Base class for failures of the equilibrium solver"""


class NoInteriorEquilibrium(EquilibriumError):
    def __init__(self, reason: str):
        super().__init__(f"No interior equilibrium: {reason}")


class DegenerateEquilibrium(EquilibriumError):
    def __init__(self, denominator: float):
        self.denominator = denominator

        super().__init__(
            f"Degenerate equilibrium: alpha + beta + i(omega) = {denominator!r} <= 0"
        )


class GovDebtUndefined(EquilibriumError):
    def __init__(self, denominator: float):
        self.denominator = denominator

        super().__init__(
            f"Government debt ratio undefined: denominator {denominator!r} is zero"
        )


class Stability(str, enum.Enum):
    LOCALLY_STABLE = "LocallyStable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


@dataclass(frozen=True, eq=False)
class Equilibrium:
    profit_share: float
    wage_share: float
    employment: float
    private_debt_ratio: float
    policy_rate: float
    """Equilibrium policy rate, equal to the target rate"""

    gov_debt_ratio: float

    jacobian: Optional[np.ndarray] = None
    eigenvalues: Optional[np.ndarray] = None
    classification: Optional[Stability] = None

    @property
    def core(self) -> CoreState:
        return CoreState(
            wage_share=self.wage_share,
            employment=self.employment,
            private_debt_ratio=self.private_debt_ratio,
            target_rate=self.policy_rate,
            policy_rate=self.policy_rate,
        )

    def residual(self, params: ModelParams) -> float:
        """Sup-norm of the core derivatives at the equilibrium point"""
        return float(np.max(np.abs(core_rhs(self.core, params).as_array())))

    def to_dict(self) -> dict[str, Any]:
        return {
            "pi_bar": self.profit_share,
            "omega_bar": self.wage_share,
            "lambda_bar": self.employment,
            "ell_bar": self.private_debt_ratio,
            "rho_bar": self.policy_rate,
            "r_g_bar": self.policy_rate,
            "b_bar": self.gov_debt_ratio,
            "jacobian": None if self.jacobian is None else self.jacobian.tolist(),
            "eigenvalues": None
            if self.eigenvalues is None
            else [[value.real, value.imag] for value in self.eigenvalues],
            "classification": None
            if self.classification is None
            else self.classification.value,
        }


def equilibrium_profit_share(params: ModelParams) -> float:
    """Profit share at which capital grows at the natural rate"""
    target = params.capital_output * (params.natural_growth + params.depreciation)
    try:
        return investment_inverse(target, params)
    except DomainError as e:
        raise NoInteriorEquilibrium(str(e)) from e


def _wage_share_lower_bound(params: ModelParams) -> float:
    """Wage share below which alpha + beta + i(omega) is not positive"""
    if params.inflation_relax == 0:
        if params.natural_growth <= 0:
            raise DegenerateEquilibrium(params.natural_growth)
        return 0.0

    pole = (1 - params.natural_growth / params.inflation_relax) / params.markup
    if pole >= 1:
        raise DegenerateEquilibrium(params.natural_growth + inflation(1.0, params))

    return max(0.0, pole)


def solve_interior_equilibrium(
    params: ModelParams, policy_rate: float = 0.0
) -> Equilibrium:
    """Interior equilibrium of the core system for a given policy rate.

    When the implicit wage-share equation has several roots the one with the
    largest wage share, hence the lowest private debt, is returned.

    :raises NoInteriorEquilibrium: If no root is bracketed in the admissible range
    :raises DegenerateEquilibrium: If alpha + beta + i(omega) is not positive
    :raises GovDebtUndefined: If the government debt ratio has a zero denominator
    """
    profit = equilibrium_profit_share(params)
    kappa = investment(profit, params)
    lending = params.lending_rate(policy_rate)

    def debt(omega: float) -> float:
        return (kappa - profit) / (params.natural_growth + inflation(omega, params))

    def mismatch(omega: float) -> float:
        return omega - (1 - profit - params.tax_share - lending * debt(omega))

    lower = _wage_share_lower_bound(params)
    grid = np.linspace(lower, 1.0, SCAN_POINTS + 1)[1:]
    values = np.array([mismatch(omega) for omega in grid])

    roots = [
        brentq(mismatch, grid[k], grid[k + 1], xtol=ROOT_TOLERANCE, maxiter=500)
        for k in range(len(grid) - 1)
        if values[k] == 0 or values[k] * values[k + 1] < 0
    ]
    if not roots:
        raise NoInteriorEquilibrium("the wage-share equation has no root in (0, 1)")

    wage_share = float(max(roots))
    denominator = params.natural_growth + inflation(wage_share, params)
    if denominator <= 0:
        raise DegenerateEquilibrium(denominator)

    try:
        employment = phillips_inverse(
            params.productivity_growth
            + (1 - params.money_illusion) * inflation(wage_share, params),
            params,
        )
    except DomainError as e:
        raise NoInteriorEquilibrium(str(e)) from e
    if employment <= 0:
        raise NoInteriorEquilibrium(f"employment rate {employment} is not positive")

    gov_denominator = denominator - policy_rate
    if gov_denominator == 0:
        raise GovDebtUndefined(gov_denominator)

    return Equilibrium(
        profit_share=profit,
        wage_share=wage_share,
        employment=employment,
        private_debt_ratio=debt(wage_share),
        policy_rate=policy_rate,
        gov_debt_ratio=(params.gov_spend_share - params.tax_share) / gov_denominator,
    )


def numerical_jacobian(
    state: CoreState, params: ModelParams, scale: float = 1e-6
) -> np.ndarray:
    """Central finite-difference Jacobian of the core system.

    Each coordinate is perturbed by ``scale * (1 + |x|)``.
    """
    x = state.as_array()
    jacobian = np.empty((CORE_DIMENSION, CORE_DIMENSION))

    for j in range(CORE_DIMENSION):
        h = scale * (1 + abs(x[j]))
        forward, backward = x.copy(), x.copy()
        forward[j] += h
        backward[j] -= h
        jacobian[:, j] = (
            core_rhs(CoreState.from_array(forward), params).as_array()
            - core_rhs(CoreState.from_array(backward), params).as_array()
        ) / (2 * h)

    return jacobian


def _neutral_directions(params: ModelParams) -> int:
    """Number of structurally zero eigenvalues of the policy block"""
    if isinstance(params.policy_mode, FixedRate):
        return 2
    if params.rate_adjust_speed == 0:
        return 2
    return 1


def _transverse_eigenvalues(jacobian: np.ndarray, params: ModelParams) -> np.ndarray:
    if isinstance(params.policy_mode, FixedRate) or (
        params.rate_adjust_speed == 0 and params.target_adjust_speed == 0
    ):
        return np.linalg.eigvals(jacobian[:3, :3])

    eigenvalues = np.linalg.eigvals(jacobian)
    order = np.argsort(np.abs(eigenvalues), kind="stable")
    return eigenvalues[order[_neutral_directions(params) :]]


def classify_stability(
    equilibrium: Equilibrium, params: ModelParams, scale: float = 1e-6
) -> Equilibrium:
    """Attach the Jacobian, its eigenvalues and a stability class.

    The class is decided by the eigenvalues transverse to the family of
    equilibria, so the zero eigenvalues of the policy block do not make every
    equilibrium marginal.

    :raises ContractViolation: If the point is not an equilibrium or the
        Jacobian is not finite
    """
    residual = equilibrium.residual(params)
    if residual >= RESIDUAL_TOLERANCE:
        raise ContractViolation(f"equilibrium residual {residual} is too large")

    jacobian = numerical_jacobian(equilibrium.core, params, scale)
    if not np.all(np.isfinite(jacobian)):
        raise ContractViolation("non-finite Jacobian entries")

    leading = float(np.max(_transverse_eigenvalues(jacobian, params).real))
    if leading > MARGINAL_TOLERANCE:
        classification = Stability.UNSTABLE
    elif leading < -MARGINAL_TOLERANCE:
        classification = Stability.LOCALLY_STABLE
    else:
        classification = Stability.MARGINAL

    return replace(
        equilibrium,
        jacobian=jacobian,
        eigenvalues=np.linalg.eigvals(jacobian),
        classification=classification,
    )


def collapse_limit(params: ModelParams) -> tuple[float, float]:
    """Wage share and inflation approached along the debt-explosion path.

    Employment goes to zero on that path, so the wage share settles where
    Phi(0) - alpha - (1 - gamma) i(omega) vanishes, or at zero when that
    bracket is negative for every positive wage share.
    """
    drift = (
        phillips(0.0, params)
        - params.productivity_growth
        + (1 - params.money_illusion) * params.inflation_relax
    )
    slope = (1 - params.money_illusion) * params.inflation_relax * params.markup

    if slope == 0:
        wage_share = 0.0 if drift <= 0 else math.inf
    else:
        wage_share = max(0.0, drift / slope)

    return wage_share, inflation(wage_share, params)
