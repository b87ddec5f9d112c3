from typing import TypedDict, Literal, Optional, Union

TerminationName = Literal[
    "HorizonReached",
    "ConvergedToEquilibrium",
    "DebtBlowup",
    "CollapseToZero",
    "SingularState",
]
Verdict = Literal["PASS", "FAIL"]

InitialDocument = TypedDict(
    "InitialDocument",
    {
        "omega": float,
        "lambda": float,
        "ell": float,
        "rho": float,
        "r_g": float,
        "b": float,
        "p": float,
        "Y": float,
    },
    total=False,
)


class PolicyModeDocument(TypedDict, total=False):
    kind: Literal["fixed_rate", "active_rule"]
    rate: float
    floor: Optional[float]


class CheckDocument(TypedDict, total=False):
    metric: str
    lower: Optional[float]
    upper: Optional[float]


class ExpectedOutcomeDocument(TypedDict, total=False):
    termination: Optional[TerminationName]
    checks: list[CheckDocument]


class ScenarioDocument(TypedDict, total=False):
    name: str
    version: int
    description: str
    params: dict[str, Union[float, PolicyModeDocument]]
    initial: InitialDocument
    settings: dict[str, Union[float, str, None]]
    expected_outcome: ExpectedOutcomeDocument


class SweepAxisDocument(TypedDict, total=False):
    name: str
    values: list[float]
    start: float
    stop: float
    steps: int


class SweepDocument(TypedDict):
    base: Union[str, ScenarioDocument]
    axes: list[SweepAxisDocument]


class IdentityRecord(TypedDict):
    identity: str
    max_residual: float
    t_worst: float
    passed: bool


class AuditDocument(TypedDict):
    label: str
    verdict: Verdict
    tolerance: float
    identities: list[IdentityRecord]
