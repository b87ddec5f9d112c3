"""Balance sheets, transactions and flow of funds of the four sectors.

Transactions are built from the levels implied by the state, the flow of
funds from the state derivatives, so the identities between the two blocks
are genuine numerical checks rather than restatements.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from nirp_sfc.instrumentation import Instrumentation, NullInstrumentation
from nirp_sfc.integrator import Trajectory
from nirp_sfc.model.functions import investment
from nirp_sfc.model.params import ModelParams
from nirp_sfc.model.state import AuxState, CoreState
from nirp_sfc.model.system import CORE_DIMENSION, joint_rhs
from nirp_sfc.types import AuditDocument

HOUSEHOLDS = "households"
FIRMS_CURRENT = "firms_current"
FIRMS_CAPITAL = "firms_capital"
BANKS = "banks"
PUBLIC = "public"
COLUMNS = (HOUSEHOLDS, FIRMS_CURRENT, FIRMS_CAPITAL, BANKS, PUBLIC)
SECTORS = (HOUSEHOLDS, "firms", BANKS, PUBLIC)

AUDIT_TOLERANCE = 1e-8

Matrix = dict[str, dict[str, float]]


@dataclass
class LedgerSnapshot:
    """The accounting matrix of the economy at one instant.

    Firms have a current and a capital account in the transactions block;
    balance sheets and flow of funds consolidate them under "firms".
    """

    t: float
    balance_sheet: Matrix
    transactions: Matrix
    flow_of_funds: Matrix

    financial_balances: dict[str, float]
    """Sector savings as stated by each sector's own budget equation"""

    memo: dict[str, float] = field(default_factory=dict)
    """Levels and flows the identities are checked against"""

    def net_worth(self) -> dict[str, float]:
        return {
            sector: sum(row.get(sector, 0.0) for row in self.balance_sheet.values())
            for sector in SECTORS
        }


def build_snapshot(
    core: CoreState,
    aux: AuxState,
    core_derivative: CoreState,
    aux_derivative: AuxState,
    params: ModelParams,
    t: float = 0.0,
    deposits: Optional[float] = None,
) -> LedgerSnapshot:
    """Reconstruct the accounting matrix from the state and its derivatives.

    Consumption is whatever part of output is neither invested nor bought by
    the public sector. Deposits default to their exact integral
    (1 - k_r) * loans, which holds when they start at that value.
    """
    price, output = aux.price_level, aux.real_output
    nominal_output = price * output
    lending = params.lending_rate(core.policy_rate)
    deposit_rate = core.policy_rate
    k_r = params.capital_ratio_banks

    capital_value = price * params.capital_output * output
    loans = core.private_debt_ratio * nominal_output
    bills = aux.gov_debt_ratio * nominal_output
    if deposits is None:
        deposits = (1 - k_r) * loans

    profit = 1 - core.wage_share - params.tax_share - lending * core.private_debt_ratio
    wages = core.wage_share * nominal_output
    gross_investment = investment(profit, params) * nominal_output
    spending = params.gov_spend_share * nominal_output
    taxes = params.tax_share * nominal_output
    depreciation = params.depreciation * capital_value
    consumption = nominal_output - gross_investment - spending
    firm_profits = nominal_output - wages - taxes - lending * loans

    bank_saving = k_r * (gross_investment - firm_profits)
    dividends = lending * loans - deposit_rate * deposits - bank_saving

    d_nominal_output = (
        aux_derivative.price_level * output + price * aux_derivative.real_output
    )
    d_loans = (
        core_derivative.private_debt_ratio * nominal_output
        + core.private_debt_ratio * d_nominal_output
    )
    d_bills = (
        aux_derivative.gov_debt_ratio * nominal_output
        + aux.gov_debt_ratio * d_nominal_output
    )
    d_deposits = (1 - k_r) * d_loans
    net_investment_flow = price * params.capital_output * aux_derivative.real_output

    balance_sheet: Matrix = {
        "capital_stock": {"firms": capital_value},
        "deposits": {HOUSEHOLDS: deposits, BANKS: -deposits},
        "loans": {"firms": -loans, BANKS: loans},
        "bills": {HOUSEHOLDS: bills, PUBLIC: -bills},
    }
    transactions: Matrix = {
        "consumption": {HOUSEHOLDS: -consumption, FIRMS_CURRENT: consumption},
        "gov_spending": {FIRMS_CURRENT: spending, PUBLIC: -spending},
        "investment": {
            FIRMS_CURRENT: gross_investment,
            FIRMS_CAPITAL: -gross_investment,
        },
        "wages": {HOUSEHOLDS: wages, FIRMS_CURRENT: -wages},
        "taxes": {FIRMS_CURRENT: -taxes, PUBLIC: taxes},
        "depreciation": {FIRMS_CURRENT: -depreciation, FIRMS_CAPITAL: depreciation},
        "interest_deposits": {
            HOUSEHOLDS: deposit_rate * deposits,
            BANKS: -deposit_rate * deposits,
        },
        "interest_loans": {FIRMS_CURRENT: -lending * loans, BANKS: lending * loans},
        "interest_bills": {
            HOUSEHOLDS: core.policy_rate * bills,
            PUBLIC: -core.policy_rate * bills,
        },
        "dividends": {HOUSEHOLDS: dividends, BANKS: -dividends},
    }
    flow_of_funds: Matrix = {
        "change_capital": {"firms": net_investment_flow},
        "change_deposits": {HOUSEHOLDS: d_deposits, BANKS: -d_deposits},
        "change_loans": {"firms": -d_loans, BANKS: d_loans},
        "change_bills": {HOUSEHOLDS: d_bills, PUBLIC: -d_bills},
    }
    financial_balances = {
        HOUSEHOLDS: wages
        + deposit_rate * deposits
        + core.policy_rate * bills
        + dividends
        - consumption,
        FIRMS_CURRENT: nominal_output - wages - taxes - lending * loans - depreciation,
        FIRMS_CAPITAL: -(gross_investment - depreciation),
        BANKS: k_r * d_loans,
        PUBLIC: taxes - spending - core.policy_rate * bills,
    }

    return LedgerSnapshot(
        t=t,
        balance_sheet=balance_sheet,
        transactions=transactions,
        flow_of_funds=flow_of_funds,
        financial_balances=financial_balances,
        memo={
            "nominal_output": nominal_output,
            "capital_value": capital_value,
            "net_investment_flow": net_investment_flow,
            "loans": loans,
            "change_loans": d_loans,
            "change_deposits": d_deposits,
            "bank_capital_ratio": k_r,
        },
    )


def _relative(total: float, terms: list[float]) -> float:
    scale = max((abs(term) for term in terms), default=0.0)
    return abs(total) / scale if scale > 0 else abs(total)


def check_snapshot(snapshot: LedgerSnapshot) -> dict[str, float]:
    """Relative residual of every accounting identity, keyed by identity name"""
    residuals: dict[str, float] = {}
    memo = snapshot.memo
    balances = snapshot.financial_balances

    expected_row_sums = {"capital_stock": memo["capital_value"]}
    for name, row in snapshot.balance_sheet.items():
        expected = expected_row_sums.get(name, 0.0)
        terms = [*row.values(), expected]
        residuals[f"balance_sheet.{name}"] = _relative(
            sum(row.values()) - expected, terms
        )

    net_worth = snapshot.net_worth()
    residuals["net_worth.total"] = _relative(
        sum(net_worth.values()) - memo["capital_value"],
        [*net_worth.values(), memo["capital_value"]],
    )

    for name, row in snapshot.transactions.items():
        residuals[f"transactions.{name}"] = _relative(
            sum(row.values()), list(row.values())
        )

    for column in COLUMNS:
        entries = [row.get(column, 0.0) for row in snapshot.transactions.values()]
        residuals[f"financial_balances.{column}"] = _relative(
            sum(entries) - balances[column], [*entries, balances[column]]
        )

    residuals["financial_balances.sum"] = _relative(
        sum(balances.values()), list(balances.values())
    )

    expected_flow_sums = {"change_capital": memo["net_investment_flow"]}
    for name, row in snapshot.flow_of_funds.items():
        expected = expected_flow_sums.get(name, 0.0)
        residuals[f"flow_of_funds.{name}"] = _relative(
            sum(row.values()) - expected, [*row.values(), expected]
        )

    sector_balances = {
        HOUSEHOLDS: balances[HOUSEHOLDS],
        "firms": balances[FIRMS_CURRENT],
        BANKS: balances[BANKS],
        PUBLIC: balances[PUBLIC],
    }
    for sector, stated in sector_balances.items():
        entries = [row.get(sector, 0.0) for row in snapshot.flow_of_funds.values()]
        residuals[f"flow_of_funds.column.{sector}"] = _relative(
            sum(entries) - stated, [*entries, stated]
        )

    change_deposits = snapshot.flow_of_funds["change_deposits"][HOUSEHOLDS]
    change_bills = snapshot.flow_of_funds["change_bills"][HOUSEHOLDS]
    residuals["household_flow_of_funds"] = _relative(
        balances[HOUSEHOLDS] - change_deposits - change_bills,
        [balances[HOUSEHOLDS], change_deposits, change_bills],
    )

    k_r = memo["bank_capital_ratio"]
    residuals["regulatory.capital"] = _relative(
        net_worth[BANKS] - k_r * memo["loans"], [net_worth[BANKS], memo["loans"]]
    )
    residuals["regulatory.bank_saving"] = _relative(
        balances[BANKS] - k_r * memo["change_loans"],
        [balances[BANKS], memo["change_loans"]],
    )
    residuals["regulatory.deposits"] = _relative(
        change_deposits - (1 - k_r) * memo["change_loans"],
        [change_deposits, memo["change_loans"]],
    )

    return residuals


def snapshot_at(
    trajectory: Trajectory, index: int, params: Optional[ModelParams] = None
) -> LedgerSnapshot:
    params = params or trajectory.params
    row = trajectory.states[index]
    derivative = joint_rhs(row, params)

    return build_snapshot(
        CoreState.from_array(row[:CORE_DIMENSION]),
        AuxState.from_array(row[CORE_DIMENSION:]),
        CoreState.from_array(derivative[:CORE_DIMENSION]),
        AuxState.from_array(derivative[CORE_DIMENSION:]),
        params,
        t=float(trajectory.times[index]),
    )


@dataclass(frozen=True)
class IdentityResult:
    identity: str
    max_residual: float
    t_worst: float
    passed: bool


@dataclass(frozen=True)
class AuditReport:
    label: str
    results: list[IdentityResult]
    tolerance: float = AUDIT_TOLERANCE

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failed(self) -> list[IdentityResult]:
        return [result for result in self.results if not result.passed]

    @property
    def worst(self) -> IdentityResult:
        return max(self.results, key=lambda result: result.max_residual)

    def to_dict(self) -> AuditDocument:
        return {
            "label": self.label,
            "verdict": "PASS" if self.passed else "FAIL",
            "tolerance": self.tolerance,
            "identities": [
                {
                    "identity": result.identity,
                    "max_residual": result.max_residual,
                    "t_worst": result.t_worst,
                    "passed": result.passed,
                }
                for result in self.results
            ],
        }


def audit_snapshots(
    snapshots: list[LedgerSnapshot],
    label: str = "",
    tolerance: float = AUDIT_TOLERANCE,
) -> AuditReport:
    worst: dict[str, tuple[float, float]] = {}

    for snapshot in snapshots:
        for identity, residual in check_snapshot(snapshot).items():
            # NaN residuals must register as failures
            if identity not in worst or not residual <= worst[identity][0]:
                worst[identity] = (residual, snapshot.t)

    return AuditReport(
        label=label,
        results=[
            IdentityResult(
                identity=identity,
                max_residual=float(residual),
                t_worst=t,
                passed=bool(residual < tolerance),
            )
            for identity, (residual, t) in worst.items()
        ],
        tolerance=tolerance,
    )


def audit_trajectory(
    trajectory: Trajectory,
    params: Optional[ModelParams] = None,
    tolerance: float = AUDIT_TOLERANCE,
    instrumentation: Instrumentation = NullInstrumentation(),
) -> AuditReport:
    """Check every accounting identity at every sample of a trajectory"""
    snapshots = [
        snapshot_at(trajectory, index, params) for index in range(len(trajectory))
    ]
    report = audit_snapshots(snapshots, label=trajectory.label, tolerance=tolerance)

    worst = report.worst
    instrumentation.audit_completed(
        trajectory.label, report.passed, worst.identity, worst.max_residual
    )

    return report


# step in years of the central difference taken along the state derivative
NET_WORTH_STEP = 1e-4


def _net_worth_of(row: np.ndarray, params: ModelParams) -> dict[str, float]:
    zero = np.zeros_like(row)
    return build_snapshot(
        CoreState.from_array(row[:CORE_DIMENSION]),
        AuxState.from_array(row[CORE_DIMENSION:]),
        CoreState.from_array(zero[:CORE_DIMENSION]),
        AuxState.from_array(zero[CORE_DIMENSION:]),
        params,
    ).net_worth()


def net_worth_evolution(
    trajectory: Trajectory, params: Optional[ModelParams] = None
) -> dict[str, float]:
    """Largest relative mismatch between net-worth growth and saving per sector.

    At every sample the rate of change of each sector's net worth is a central
    difference along the state derivative, which does not depend on how far
    apart the samples are. It is compared with the sector's financial balance;
    firms also gain the revaluation of their capital stock.
    """
    params = params or trajectory.params
    worst = {sector: 0.0 for sector in SECTORS}

    for index in range(len(trajectory)):
        row = trajectory.states[index]
        snapshot = snapshot_at(trajectory, index, params)
        direction = NET_WORTH_STEP * joint_rhs(row, params)
        ahead = _net_worth_of(row + direction, params)
        behind = _net_worth_of(row - direction, params)
        worth = snapshot.net_worth()

        balances = snapshot.financial_balances
        revaluation = trajectory.inflation[index] * snapshot.memo["capital_value"]
        savings = {
            HOUSEHOLDS: balances[HOUSEHOLDS],
            "firms": balances[FIRMS_CURRENT] + revaluation,
            BANKS: balances[BANKS],
            PUBLIC: balances[PUBLIC],
        }

        for sector in SECTORS:
            rate = (ahead[sector] - behind[sector]) / (2 * NET_WORTH_STEP)
            scale = max(
                abs(worth[sector]),
                abs(rate),
                abs(savings[sector]),
                np.finfo(float).tiny,
            )
            worst[sector] = max(worst[sector], abs(rate - savings[sector]) / scale)

    return worst
