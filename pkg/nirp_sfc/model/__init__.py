from nirp_sfc.model.errors import (
    ModelError,  # noqa: F401
    DomainError,  # noqa: F401
    SingularStateError,  # noqa: F401
    ContractViolation,  # noqa: F401
    InvalidParametersError,  # noqa: F401
)
from nirp_sfc.model.params import (
    ModelParams,  # noqa: F401
    ActiveRule,  # noqa: F401
    FixedRate,  # noqa: F401
    PolicyMode,  # noqa: F401
)
from nirp_sfc.model.state import (
    CoreState,  # noqa: F401
    AuxState,  # noqa: F401
    DerivedObservables,  # noqa: F401
    Levels,  # noqa: F401
)
from nirp_sfc.model.functions import (
    phillips,  # noqa: F401
    phillips_inverse,  # noqa: F401
    investment,  # noqa: F401
    investment_inverse,  # noqa: F401
    inflation,  # noqa: F401
    profit_share,  # noqa: F401
    wage_growth,  # noqa: F401
    capital_growth,  # noqa: F401
)
from nirp_sfc.model.system import (
    core_rhs,  # noqa: F401
    aux_rhs,  # noqa: F401
    joint_rhs,  # noqa: F401
    derived,  # noqa: F401
    levels,  # noqa: F401
    initial_labor_force,  # noqa: F401
)
