import abc
import dataclasses
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from nirp_sfc.events import Termination
from nirp_sfc.integrator import InvalidSettingsError, SolverSettings
from nirp_sfc.model.errors import ContractViolation, InvalidParametersError
from nirp_sfc.model.params import ModelParams
from nirp_sfc.model.state import AuxState, CoreState

INITIAL_FIELDS = {
    "omega": "wage_share",
    "lambda": "employment",
    "ell": "private_debt_ratio",
    "rho": "target_rate",
    "r_g": "policy_rate",
}
AUX_INITIAL_FIELDS = {"b": "gov_debt_ratio", "p": "price_level", "Y": "real_output"}


class ScenarioNotFound(Exception):
    """Raised when a scenario is not known to a provider"""

    name: str
    """The name that was looked up"""

    known: list[str]
    """The names the provider does know"""

    def __init__(self, name: str, known: Iterable[str]):
        self.name = name
        self.known = sorted(known)

        super().__init__(
            f"Scenario {name} not found. Known scenarios: {', '.join(self.known)}"
        )


class ScenarioFormatError(Exception):
    """Raised when a scenario or sweep document is malformed"""

    path: str
    """Where in the document the problem is, e.g. ``params.markup``"""

    def __init__(self, path: str, reason: str):
        self.path = path

        super().__init__(f"{path}: {reason}")


@dataclass(frozen=True)
class Check:
    """A bound on a scalar metric of a finished trajectory"""

    metric: str
    lower: Optional[float] = None
    upper: Optional[float] = None

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class ExpectedOutcome:
    termination: Optional[Termination] = None
    """Required termination, any termination when unset"""

    checks: tuple[Check, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "termination": None if self.termination is None else self.termination.value,
            "checks": [check.to_dict() for check in self.checks],
        }


@dataclass(frozen=True)
class Scenario:
    """A parameter set, an initial condition, solver settings and what to expect"""

    name: str
    params: ModelParams
    initial_core: CoreState
    initial_aux: AuxState
    settings: SolverSettings = field(default_factory=SolverSettings)
    expected_outcome: ExpectedOutcome = field(default_factory=ExpectedOutcome)
    version: int = 1
    description: str = ""

    def to_dict(self) -> dict[str, Any]:
        initial = {
            key: getattr(self.initial_core, attribute)
            for key, attribute in INITIAL_FIELDS.items()
        }
        initial.update(
            {
                key: getattr(self.initial_aux, attribute)
                for key, attribute in AUX_INITIAL_FIELDS.items()
            }
        )

        return {
            "name": self.name,
            "version": self.version,
            "description": self.description,
            "params": self.params.to_dict(),
            "initial": initial,
            "settings": self.settings.to_dict(),
            "expected_outcome": self.expected_outcome.to_dict(),
        }

    @classmethod
    def from_dict(cls, document: Any) -> "Scenario":
        """Build a scenario from a JSON document.

        :raises ScenarioFormatError: With the path of the first offending field
        """
        if not isinstance(document, dict):
            raise ScenarioFormatError("$", "expected an object")

        unknown = set(document) - {
            "name",
            "version",
            "description",
            "params",
            "initial",
            "settings",
            "expected_outcome",
        }
        if unknown:
            raise ScenarioFormatError(
                ", ".join(sorted(unknown)), "unknown top-level field"
            )
        if not isinstance(document.get("name"), str):
            raise ScenarioFormatError("name", "expected a string")

        try:
            params = ModelParams.from_dict(_object(document, "params"))
        except InvalidParametersError as e:
            raise ScenarioFormatError(f"params.{e.field}", str(e)) from e

        try:
            settings = SolverSettings.from_dict(_object(document, "settings"))
        except (InvalidSettingsError, TypeError) as e:
            raise ScenarioFormatError("settings", str(e)) from e

        core, aux = _initial_from_dict(_object(document, "initial"))

        return cls(
            name=document["name"],
            params=params,
            initial_core=core,
            initial_aux=aux,
            settings=settings,
            expected_outcome=_expected_from_dict(_object(document, "expected_outcome")),
            version=int(document.get("version", 1)),
            description=str(document.get("description", "")),
        )


def _object(document: dict[str, Any], key: str) -> dict[str, Any]:
    value = document.get(key, {})
    if not isinstance(value, dict):
        raise ScenarioFormatError(key, "expected an object")
    return value


def _initial_from_dict(initial: dict[str, Any]) -> tuple[CoreState, AuxState]:
    unknown = set(initial) - set(INITIAL_FIELDS) - set(AUX_INITIAL_FIELDS)
    if unknown:
        raise ScenarioFormatError(
            f"initial.{', '.join(sorted(unknown))}", "unknown initial value"
        )

    for key, value in initial.items():
        if not isinstance(value, (int, float)):
            raise ScenarioFormatError(
                f"initial.{key}", f"expected a number, got {value!r}"
            )

    for key in ("omega", "lambda", "ell"):
        if key not in initial:
            raise ScenarioFormatError(f"initial.{key}", "missing")

    core = CoreState(
        wage_share=float(initial["omega"]),
        employment=float(initial["lambda"]),
        private_debt_ratio=float(initial["ell"]),
        target_rate=float(initial.get("rho", 0.0)),
        policy_rate=float(initial.get("r_g", 0.0)),
    )
    aux = AuxState(
        gov_debt_ratio=float(initial.get("b", 0.0)),
        price_level=float(initial.get("p", 1.0)),
        real_output=float(initial.get("Y", 100.0)),
    )

    try:
        core.validate()
        aux.validate()
    except ContractViolation as e:
        raise ScenarioFormatError("initial", str(e)) from e

    return core, aux


def _expected_from_dict(expected: dict[str, Any]) -> ExpectedOutcome:
    termination = expected.get("termination")
    if termination is not None:
        try:
            termination = Termination(termination)
        except ValueError as e:
            raise ScenarioFormatError(
                "expected_outcome.termination",
                f"expected one of {', '.join(t.value for t in Termination)}",
            ) from e

    checks = []
    for index, check in enumerate(expected.get("checks", [])):
        path = f"expected_outcome.checks[{index}]"
        if not isinstance(check, dict) or not isinstance(check.get("metric"), str):
            raise ScenarioFormatError(path, "expected an object with a metric")
        for bound in ("lower", "upper"):
            if check.get(bound) is not None and not isinstance(
                check[bound], (int, float)
            ):
                raise ScenarioFormatError(f"{path}.{bound}", "expected a number")
        checks.append(
            Check(
                metric=check["metric"],
                lower=check.get("lower"),
                upper=check.get("upper"),
            )
        )

    return ExpectedOutcome(termination=termination, checks=tuple(checks))


class ScenarioProvider(abc.ABC):
    """A source of named scenarios"""

    @abc.abstractmethod
    def get_scenario(self, name: str) -> Scenario:
        """Get a scenario by name

        :raises ScenarioNotFound: If the scenario is not found
        """
        ...

    @abc.abstractmethod
    def names(self) -> list[str]:
        ...
