import dataclasses
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from nirp_sfc.events import Termination
from nirp_sfc.instrumentation import Instrumentation, NullInstrumentation
from nirp_sfc.integrator import Trajectory, integrate
from nirp_sfc.ledger import AuditReport, audit_trajectory
from nirp_sfc.model.params import ModelParams
from nirp_sfc.scenarios.base import (
    AUX_INITIAL_FIELDS,
    INITIAL_FIELDS,
    Scenario,
    ScenarioFormatError,
    ScenarioNotFound,
)
from nirp_sfc.scenarios.outcome import OutcomeVerdict, evaluate_outcome
from nirp_sfc.scenarios.providers import PresetProvider

logger = logging.getLogger(__name__)

FINAL_FIELDS = ("omega", "lambda", "ell", "rho", "r_g", "b")

SWEEPABLE_PARAMS = {
    item.name for item in dataclasses.fields(ModelParams) if item.name != "policy_mode"
}


@dataclass(frozen=True)
class ScenarioRun:
    """A scenario together with its trajectory, audit and verdict"""

    scenario: Scenario
    trajectory: Trajectory
    audit: AuditReport
    verdict: OutcomeVerdict

    @property
    def passed(self) -> bool:
        return self.audit.passed and self.verdict.passed


def run_scenario(
    scenario: Scenario, instrumentation: Instrumentation = NullInstrumentation()
) -> ScenarioRun:
    """Integrate a scenario, audit the trajectory and evaluate the expected outcome"""
    trajectory = integrate(
        scenario.initial_core,
        scenario.initial_aux,
        scenario.params,
        scenario.settings,
        instrumentation=instrumentation,
        label=scenario.name,
    )

    return ScenarioRun(
        scenario=scenario,
        trajectory=trajectory,
        audit=audit_trajectory(trajectory, instrumentation=instrumentation),
        verdict=evaluate_outcome(scenario.expected_outcome, trajectory),
    )


@dataclass(frozen=True)
class SweepAxis:
    """One dimension of a sweep.

    The name is ``initial.<key>`` for an initial value (``initial.ell``) or
    ``params.<field>`` for a numeric model parameter.
    """

    name: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise ScenarioFormatError(f"axes.{self.name}", "an axis needs values")

        kind, _, key = self.name.partition(".")
        if kind == "initial":
            if key not in INITIAL_FIELDS and key not in AUX_INITIAL_FIELDS:
                raise ScenarioFormatError(
                    f"axes.{self.name}", "unknown initial value"
                )
        elif kind == "params":
            if key not in SWEEPABLE_PARAMS:
                raise ScenarioFormatError(f"axes.{self.name}", "unknown parameter")
        else:
            raise ScenarioFormatError(
                f"axes.{self.name}", "expected initial.<key> or params.<field>"
            )

    @classmethod
    def linspace(cls, name: str, start: float, stop: float, steps: int) -> "SweepAxis":
        if steps < 1:
            raise ScenarioFormatError(f"axes.{name}.steps", "must be at least 1")
        return cls(name, tuple(float(v) for v in np.linspace(start, stop, steps)))


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[SweepAxis, ...]

    def __post_init__(self) -> None:
        if len(self.axes) == 0:
            raise ScenarioFormatError("axes", "a sweep needs at least one axis")

        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise ScenarioFormatError("axes", "axis names must be unique")

    def cells(self) -> list[dict[str, float]]:
        """Grid points in row-major order, the last axis varying fastest"""
        names = [axis.name for axis in self.axes]
        return [
            dict(zip(names, point))
            for point in itertools.product(*(axis.values for axis in self.axes))
        ]

    @classmethod
    def from_dict(cls, axes: Any) -> "SweepSpec":
        if not isinstance(axes, list):
            raise ScenarioFormatError("axes", "expected a list")

        parsed = []
        for index, axis in enumerate(axes):
            path = f"axes[{index}]"
            if not isinstance(axis, dict) or not isinstance(axis.get("name"), str):
                raise ScenarioFormatError(path, "expected an object with a name")

            if "values" in axis:
                values = axis["values"]
                if not isinstance(values, list) or not all(
                    isinstance(value, (int, float)) for value in values
                ):
                    raise ScenarioFormatError(f"{path}.values", "expected numbers")
                parsed.append(SweepAxis(axis["name"], tuple(map(float, values))))
            else:
                try:
                    parsed.append(
                        SweepAxis.linspace(
                            axis["name"],
                            float(axis["start"]),
                            float(axis["stop"]),
                            int(axis["steps"]),
                        )
                    )
                except (KeyError, TypeError, ValueError) as e:
                    raise ScenarioFormatError(
                        path, "expected values or start, stop and steps"
                    ) from e

        return cls(tuple(parsed))

    def to_dict(self) -> list[dict[str, Any]]:
        return [{"name": axis.name, "values": list(axis.values)} for axis in self.axes]


def load_sweep_document(document: Any) -> tuple[SweepSpec, Scenario]:
    """Parse a sweep document into its grid and base scenario.

    The base is a preset name or an inline scenario document.
    """
    if not isinstance(document, dict):
        raise ScenarioFormatError("$", "expected an object")

    base = document.get("base")
    if isinstance(base, str):
        try:
            scenario = PresetProvider().get_scenario(base)
        except ScenarioNotFound as e:
            raise ScenarioFormatError("base", str(e)) from e
    elif isinstance(base, dict):
        scenario = Scenario.from_dict(base)
    else:
        raise ScenarioFormatError("base", "expected a preset name or a scenario")

    return SweepSpec.from_dict(document.get("axes")), scenario


def apply_cell(base: Scenario, coordinates: dict[str, float]) -> Scenario:
    """The base scenario moved to one grid point"""
    core, aux, params = base.initial_core, base.initial_aux, base.params

    for name, value in coordinates.items():
        kind, _, key = name.partition(".")
        if kind == "params":
            params = params.with_overrides(**{key: value})
        elif key in INITIAL_FIELDS:
            core = dataclasses.replace(core, **{INITIAL_FIELDS[key]: value})
        else:
            aux = dataclasses.replace(aux, **{AUX_INITIAL_FIELDS[key]: value})

    return dataclasses.replace(base, params=params, initial_core=core, initial_aux=aux)


@dataclass(frozen=True)
class SweepCell:
    index: int
    coordinates: dict[str, float]
    termination: Optional[Termination]
    min_policy_rate: float
    final: dict[str, float] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def run_cell(task: tuple[int, Scenario, dict[str, float]]) -> SweepCell:
    """Run one grid point. Failures are recorded on the cell."""
    index, base, coordinates = task

    try:
        scenario = apply_cell(base, coordinates)
        trajectory = integrate(
            scenario.initial_core,
            scenario.initial_aux,
            scenario.params,
            scenario.settings,
            label=f"{base.name}[{index}]",
        )
    except Exception as e:
        return SweepCell(
            index=index,
            coordinates=coordinates,
            termination=None,
            min_policy_rate=math.nan,
            error=f"{type(e).__name__}: {e}",
        )

    final = trajectory.states[-1]
    return SweepCell(
        index=index,
        coordinates=coordinates,
        termination=trajectory.termination,
        min_policy_rate=float(np.min(trajectory.policy_rate)),
        final={name: float(final[k]) for k, name in enumerate(FINAL_FIELDS)},
    )


def sweep(
    spec: SweepSpec,
    base: Scenario,
    workers: int = 1,
    instrumentation: Instrumentation = NullInstrumentation(),
) -> list[SweepCell]:
    """Run every grid point of a sweep, in parallel when `workers` > 1.

    Cells come back ordered by index whatever order they finished in.
    """
    tasks = [(index, base, cell) for index, cell in enumerate(spec.cells())]

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(run_cell, tasks))
    else:
        cells = [run_cell(task) for task in tasks]

    cells.sort(key=lambda cell: cell.index)
    for cell in cells:
        if cell.error is not None:
            instrumentation.sweep_cell_failed(cell.index, cell.error)

    logger.debug("Sweep of %s finished with %d cells", base.name, len(cells))
    return cells
