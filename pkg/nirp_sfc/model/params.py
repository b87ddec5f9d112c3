import dataclasses
import math
from dataclasses import dataclass
from typing import Any, Optional, Union

from nirp_sfc.model.errors import InvalidParametersError


@dataclass(frozen=True)
class ActiveRule:
    """The policy rate follows the target rate, which follows capital growth"""

    floor: Optional[float] = None
    """An optional lower bound for the policy rate (e.g. the cost of holding cash)"""


@dataclass(frozen=True)
class FixedRate:
    """The policy equations are switched off and loans carry a constant rate"""

    rate: float
    """The lending rate charged on loans, per year"""


PolicyMode = Union[ActiveRule, FixedRate]


@dataclass(frozen=True)
class ModelParams:
    """Structural constants of the model.

    Defaults are the baseline calibration. Fiscal shares, the loan spread and
    the policy speeds default to a passive public sector.
    """

    phillips_const: float = -0.0401
    """Constant term of the Phillips curve"""

    phillips_coef: float = 0.0001
    """Coefficient of the Phillips curve"""

    inv_const: float = -0.0065
    """Constant term of the investment function"""

    inv_shift: float = -5.0
    """Affine term in the exponent of the investment function"""

    inv_slope: float = 20.0
    """Coefficient in the exponent of the investment function"""

    capital_ratio_banks: float = 0.1
    markup: float = 1.3
    productivity_growth: float = 0.025
    labor_growth: float = 0.02

    money_illusion: float = 0.8
    """Share of observed inflation passed through to nominal wage claims"""

    depreciation: float = 0.03
    inflation_relax: float = 0.35
    capital_output: float = 3.0

    gov_spend_share: float = 0.0
    tax_share: float = 0.0

    loan_spread: float = 0.03
    """Spread of the lending rate over the policy rate"""

    rate_adjust_speed: float = 0.0
    """Speed at which the policy rate follows the target rate"""

    target_adjust_speed: float = 0.0
    """Speed at which the target rate reacts to the capital growth gap"""

    policy_mode: PolicyMode = ActiveRule()

    def __post_init__(self) -> None:
        for item in dataclasses.fields(self):
            value = getattr(self, item.name)
            if isinstance(value, float) and not math.isfinite(value):
                raise InvalidParametersError(item.name, "must be finite")

        if self.markup < 1:
            raise InvalidParametersError("markup", "must be at least 1")
        if not 0 < self.capital_ratio_banks < 1:
            raise InvalidParametersError("capital_ratio_banks", "must be in (0, 1)")
        if self.capital_output <= 0:
            raise InvalidParametersError("capital_output", "must be positive")
        if self.depreciation < 0:
            raise InvalidParametersError("depreciation", "must be non-negative")
        if not 0 <= self.money_illusion <= 1:
            raise InvalidParametersError("money_illusion", "must be in [0, 1]")
        if self.phillips_coef <= 0:
            raise InvalidParametersError("phillips_coef", "must be positive")
        if self.inv_slope <= 0:
            raise InvalidParametersError("inv_slope", "must be positive")
        if self.rate_adjust_speed < 0:
            raise InvalidParametersError("rate_adjust_speed", "must be non-negative")
        if self.target_adjust_speed < 0:
            raise InvalidParametersError("target_adjust_speed", "must be non-negative")

    @property
    def is_fixed_rate(self) -> bool:
        return isinstance(self.policy_mode, FixedRate)

    @property
    def natural_growth(self) -> float:
        """Growth rate of productivity plus growth rate of the labour force"""
        return self.productivity_growth + self.labor_growth

    def lending_rate(self, policy_rate: float) -> float:
        if isinstance(self.policy_mode, FixedRate):
            return self.policy_mode.rate

        return policy_rate + self.loan_spread

    def with_overrides(self, **overrides: Any) -> "ModelParams":
        return dataclasses.replace(self, **overrides)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ModelParams":
        """Build a parameter set from a JSON-like mapping of overrides"""
        known = {item.name for item in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidParametersError(
                ", ".join(sorted(unknown)), "unknown parameter"
            )

        values = dict(data)
        if "policy_mode" in values:
            values["policy_mode"] = policy_mode_from_dict(values["policy_mode"])

        for name, value in values.items():
            if name != "policy_mode" and not isinstance(value, (int, float)):
                raise InvalidParametersError(name, f"expected a number, got {value!r}")

        return cls(
            **{
                key: float(value) if key != "policy_mode" else value
                for key, value in values.items()
            }
        )

    def to_dict(self) -> dict[str, Any]:
        values = dataclasses.asdict(self)
        values["policy_mode"] = policy_mode_to_dict(self.policy_mode)
        return values


def policy_mode_from_dict(data: Any) -> PolicyMode:
    if not isinstance(data, dict) or "kind" not in data:
        raise InvalidParametersError("policy_mode", "expected an object with a kind")

    if data["kind"] == "fixed_rate":
        if not isinstance(data.get("rate"), (int, float)):
            raise InvalidParametersError("policy_mode.rate", "expected a number")
        return FixedRate(rate=float(data["rate"]))
    if data["kind"] == "active_rule":
        floor = data.get("floor")
        if floor is not None and not isinstance(floor, (int, float)):
            raise InvalidParametersError("policy_mode.floor", "expected a number")
        return ActiveRule(floor=None if floor is None else float(floor))

    raise InvalidParametersError(
        "policy_mode.kind", f"expected fixed_rate or active_rule, got {data['kind']!r}"
    )


def policy_mode_to_dict(mode: PolicyMode) -> dict[str, Any]:
    if isinstance(mode, FixedRate):
        return {"kind": "fixed_rate", "rate": mode.rate}

    return {"kind": "active_rule", "floor": mode.floor}
