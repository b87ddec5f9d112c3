import math
from dataclasses import dataclass, astuple
from typing import Iterable

import numpy as np

from nirp_sfc.model.errors import ContractViolation


@dataclass(frozen=True)
class CoreState:
    """The five coordinates evolved by the main system"""

    wage_share: float
    employment: float
    private_debt_ratio: float
    target_rate: float
    policy_rate: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, values: Iterable[float]) -> "CoreState":
        return cls(*(float(value) for value in values))

    def validate(self) -> None:
        """Check the type invariants.

        :raises ContractViolation: If a coordinate is non-finite or out of range
        """
        if not all(math.isfinite(value) for value in astuple(self)):
            raise ContractViolation(f"non-finite core state {self}")
        if self.wage_share < 0:
            raise ContractViolation(f"negative wage share {self.wage_share}")
        if not 0 <= self.employment < 1:
            raise ContractViolation(f"employment {self.employment} outside [0, 1)")


@dataclass(frozen=True)
class AuxState:
    """Auxiliary ratios and levels integrated alongside the core system"""

    gov_debt_ratio: float
    price_level: float = 1.0
    real_output: float = 100.0

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, values: Iterable[float]) -> "AuxState":
        return cls(*(float(value) for value in values))

    def validate(self) -> None:
        if not all(math.isfinite(value) for value in astuple(self)):
            raise ContractViolation(f"non-finite auxiliary state {self}")
        if self.price_level <= 0:
            raise ContractViolation(f"non-positive price level {self.price_level}")
        if self.real_output <= 0:
            raise ContractViolation(f"non-positive real output {self.real_output}")


@dataclass(frozen=True)
class DerivedObservables:
    profit_share: float
    inflation: float
    lending_rate: float
    deposit_rate: float
    capital_growth: float


@dataclass(frozen=True)
class Levels:
    """Nominal and real levels reconstructed from the ratios at time t"""

    productivity: float
    labor_force: float
    employed: float
    nominal_wage: float
    capital: float
    loans: float
    gov_debt: float
    deposits: float
    nominal_output: float


CORE_FIELDS = ("omega", "lambda", "ell", "rho", "r_g")
AUX_FIELDS = ("b", "p", "Y")
