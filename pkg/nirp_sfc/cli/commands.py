import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from nirp_sfc.charts import EmptyTrajectoryError, write_svg
from nirp_sfc.cli.handler import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_PREDICATE,
    EXIT_USAGE,
    CommandHandler,
)
from nirp_sfc.configuration import ConfigurationError, OutputDirectory, WorkerCount
from nirp_sfc.equilibrium import (
    EquilibriumError,
    classify_stability,
    solve_interior_equilibrium,
)
from nirp_sfc.integrator import InvalidSettingsError
from nirp_sfc.ledger import AUDIT_TOLERANCE, audit_trajectory
from nirp_sfc.model.errors import (
    ContractViolation,
    InvalidParametersError,
    ModelError,
)
from nirp_sfc.model.params import ModelParams
from nirp_sfc.rates import (
    InsufficientDataError,
    RatesFormatError,
    rates_check,
    read_rates_csv,
)
from nirp_sfc.scenarios.base import Scenario, ScenarioFormatError, ScenarioNotFound
from nirp_sfc.scenarios.outcome import UnknownMetricError
from nirp_sfc.scenarios.presets import preset
from nirp_sfc.scenarios.providers import load_scenario_file, resolve_scenario
from nirp_sfc.scenarios.runner import load_sweep_document, run_scenario, sweep
from nirp_sfc.serialization import (
    OutputWriteError,
    TrajectoryFormatError,
    dumps,
    read_trajectory,
    write_json,
    write_sweep_csv,
    write_sweep_json,
    write_trajectory_csv,
    write_trajectory_json,
)

USAGE_ERRORS: dict[type[Exception], int] = {
    ScenarioNotFound: EXIT_USAGE,
    ScenarioFormatError: EXIT_USAGE,
    InvalidParametersError: EXIT_USAGE,
    InvalidSettingsError: EXIT_USAGE,
    ConfigurationError: EXIT_USAGE,
    UnknownMetricError: EXIT_USAGE,
    OutputWriteError: EXIT_USAGE,
}


def _output_directory(arguments: argparse.Namespace) -> Path:
    if arguments.out is not None:
        return Path(arguments.out)
    return OutputDirectory().path


def _with_solver_overrides(
    scenario: Scenario, arguments: argparse.Namespace
) -> Scenario:
    overrides = {}
    if arguments.horizon is not None:
        overrides["horizon"] = arguments.horizon
    if arguments.tol is not None:
        overrides["rel_tol"] = arguments.tol
        overrides["abs_tol"] = min(scenario.settings.abs_tol, arguments.tol * 1e-2)
    if not overrides:
        return scenario

    return dataclasses.replace(
        scenario, settings=scenario.settings.with_overrides(**overrides)
    )


def _add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="output directory (default: $NIRP_SFC_OUT_DIR)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_solver_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--horizon", type=float, help="override the horizon in years")
    parser.add_argument("--tol", type=float, help="override the relative tolerance")


@dataclass
class SimulateCommand(CommandHandler):
    name = "simulate"
    help = "integrate a scenario and write its trajectory, chart and audit"

    allowed_errors = {
        **USAGE_ERRORS,
        ContractViolation: EXIT_NUMERICAL,
        ModelError: EXIT_NUMERICAL,
        EmptyTrajectoryError: EXIT_NUMERICAL,
    }

    @classmethod
    def configure(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("scenario", help="preset name or path to a scenario.json")
        _add_output_arguments(parser)
        _add_solver_arguments(parser)

    def handler(self, arguments: argparse.Namespace) -> int:
        scenario = _with_solver_overrides(
            resolve_scenario(arguments.scenario), arguments
        )
        out = _output_directory(arguments)

        run = run_scenario(scenario, instrumentation=self.instrumentation)

        if arguments.format == "json":
            write_trajectory_json(run.trajectory, out / "trajectory.json")
        else:
            write_trajectory_csv(run.trajectory, out / "trajectory.csv")
        write_svg(run.trajectory, out / "trajectory.svg")
        write_json(out / "audit.json", run.audit.to_dict())
        write_json(out / "scenario.json", scenario.to_dict())
        write_json(out / "outcome.json", run.verdict.to_dict())

        sys.stdout.write(
            dumps(
                {
                    "scenario": scenario.name,
                    "termination": run.trajectory.termination.value,
                    "t_final": float(run.trajectory.times[-1]),
                    "audit": "PASS" if run.audit.passed else "FAIL",
                    "outcome": "PASS" if run.verdict.passed else "FAIL",
                }
            )
        )

        if not run.audit.passed:
            return EXIT_NUMERICAL
        if not run.verdict.passed:
            return EXIT_PREDICATE
        return EXIT_OK


@dataclass
class EquilibriumCommand(CommandHandler):
    name = "equilibrium"
    help = "print the interior equilibrium and its stability as JSON"

    allowed_errors = {
        **USAGE_ERRORS,
        EquilibriumError: EXIT_NUMERICAL,
        ModelError: EXIT_NUMERICAL,
    }

    @classmethod
    def configure(cls, parser: argparse.ArgumentParser) -> None:
        source = parser.add_mutually_exclusive_group()
        source.add_argument("--preset", help="take the parameters of a preset")
        source.add_argument(
            "--params", help="path to a JSON object of parameter overrides"
        )
        parser.add_argument(
            "--policy-rate", type=float, default=0.0, help="policy rate (default 0)"
        )
        parser.add_argument("--out", help="also write equilibrium.json here")

    def _params(self, arguments: argparse.Namespace) -> ModelParams:
        if arguments.preset is not None:
            return preset(arguments.preset).params
        if arguments.params is not None:
            path = Path(arguments.params)
            try:
                overrides = json.loads(path.read_text(encoding="utf-8"))
            except FileNotFoundError:
                raise ScenarioNotFound(str(path), [])
            except json.JSONDecodeError as e:
                raise ScenarioFormatError(
                    f"{path}:{e.lineno}", f"invalid JSON: {e.msg}"
                )
            if not isinstance(overrides, dict):
                raise ScenarioFormatError(str(path), "expected an object")
            return ModelParams.from_dict(overrides)
        return ModelParams()

    def handler(self, arguments: argparse.Namespace) -> int:
        params = self._params(arguments)
        equilibrium = classify_stability(
            solve_interior_equilibrium(params, arguments.policy_rate), params
        )

        document = equilibrium.to_dict()
        if arguments.out is not None:
            write_json(Path(arguments.out) / "equilibrium.json", document)
        sys.stdout.write(dumps(document))

        return EXIT_OK


@dataclass
class SweepCommand(CommandHandler):
    name = "sweep"
    help = "run a grid of scenarios and write one row per cell"

    allowed_errors = {**USAGE_ERRORS}

    @classmethod
    def configure(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("spec", help="path to a sweep document")
        _add_output_arguments(parser)
        _add_solver_arguments(parser)
        parser.add_argument(
            "--workers", type=int, help="worker processes (default: $NIRP_SFC_WORKERS)"
        )

    def handler(self, arguments: argparse.Namespace) -> int:
        path = Path(arguments.spec)
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ScenarioNotFound(str(path), [])
        except json.JSONDecodeError as e:
            raise ScenarioFormatError(f"{path}:{e.lineno}", f"invalid JSON: {e.msg}")

        spec, base = load_sweep_document(document)
        base = _with_solver_overrides(base, arguments)
        workers = arguments.workers or WorkerCount().value
        if workers < 1:
            raise ConfigurationError("--workers", str(workers), "must be at least 1")

        cells = sweep(spec, base, workers=workers, instrumentation=self.instrumentation)

        out = _output_directory(arguments)
        if arguments.format == "json":
            write_sweep_json(cells, out / "sweep.json")
        else:
            write_sweep_csv(cells, out / "sweep.csv")

        sys.stdout.write(
            dumps(
                {
                    "cells": len(cells),
                    "failed": sum(1 for cell in cells if cell.failed),
                    "terminations": {
                        str(cell.index): None
                        if cell.termination is None
                        else cell.termination.value
                        for cell in cells
                    },
                }
            )
        )
        return EXIT_OK


@dataclass
class AuditCommand(CommandHandler):
    name = "audit"
    help = "check the accounting identities along a written trajectory"

    allowed_errors = {
        **USAGE_ERRORS,
        TrajectoryFormatError: EXIT_USAGE,
        ModelError: EXIT_NUMERICAL,
    }

    @classmethod
    def configure(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("trajectory", help="path to trajectory.csv or .json")
        parser.add_argument(
            "--scenario",
            help="scenario the trajectory was run with "
            "(default: scenario.json next to the trajectory)",
        )
        parser.add_argument(
            "--tol", type=float, default=AUDIT_TOLERANCE, help="residual tolerance"
        )
        parser.add_argument("--out", help="also write audit.json here")

    def handler(self, arguments: argparse.Namespace) -> int:
        path = Path(arguments.trajectory)
        scenario_path = (
            Path(arguments.scenario)
            if arguments.scenario is not None
            else path.parent / "scenario.json"
        )
        scenario = load_scenario_file(scenario_path)

        trajectory = read_trajectory(path, scenario.params, label=scenario.name)
        report = audit_trajectory(
            trajectory, tolerance=arguments.tol, instrumentation=self.instrumentation
        )

        if arguments.out is not None:
            write_json(Path(arguments.out) / "audit.json", report.to_dict())
        sys.stdout.write(dumps(report.to_dict()))

        return EXIT_OK if report.passed else EXIT_NUMERICAL


@dataclass
class RatesCheckCommand(CommandHandler):
    name = "rates-check"
    help = "check the spreads of lending and deposit rates over the policy rate"

    allowed_errors = {
        **USAGE_ERRORS,
        RatesFormatError: EXIT_USAGE,
        InsufficientDataError: EXIT_USAGE,
    }

    @classmethod
    def configure(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("rates", help="CSV with date and the three rate columns")

    def handler(self, arguments: argparse.Namespace) -> int:
        report = rates_check(read_rates_csv(arguments.rates))
        sys.stdout.write(dumps(report.to_dict()))

        return EXIT_OK if report.passed else EXIT_PREDICATE


COMMANDS: list[type[CommandHandler]] = [
    SimulateCommand,
    EquilibriumCommand,
    SweepCommand,
    AuditCommand,
    RatesCheckCommand,
]
