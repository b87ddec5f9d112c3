import abc
import logging
import sys
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, MutableMapping, Union

from pythonjsonlogger import jsonlogger


if TYPE_CHECKING:
    _LoggerAdapter = logging.LoggerAdapter[logging.Logger]
else:
    _LoggerAdapter = logging.LoggerAdapter


class JsonLogger(_LoggerAdapter):
    """Makes the stack level correct for log calls inside instrumentation classes"""

    def __init__(self, level: Union[int, str] = logging.INFO) -> None:
        base_logger = logging.getLogger("nirp_sfc")
        logged_keys = ["asctime", "levelname", "name", "module", "lineno", "message"]

        json_formatter = jsonlogger.JsonFormatter(  # type: ignore
            " ".join(self.log_format(logged_keys)),
            rename_fields={"asctime": "time", "levelname": "level"},
        )

        # stdout is reserved for command output
        json_handler = logging.StreamHandler(sys.stderr)
        json_handler.setFormatter(json_formatter)

        base_logger.handlers = [json_handler]
        base_logger.propagate = False

        base_logger.setLevel(level)

        super().__init__(base_logger, {})

    def log_format(self, keys: list[str]) -> list[str]:
        return ["%({0:s})s".format(i) for i in keys]

    def process(
        self, msg: Any, kwargs: MutableMapping[str, Any]
    ) -> tuple[Any, MutableMapping[str, Any]]:
        kwargs["stacklevel"] = 4

        return msg, kwargs


class Instrumentation(abc.ABC):
    """Domain events reported by simulations, audits and commands"""

    @abc.abstractmethod
    def integration_started(self, label: str, horizon: float) -> None:
        pass

    @abc.abstractmethod
    def integration_finished(
        self, label: str, termination: str, t_final: float, samples: int
    ) -> None:
        pass

    @abc.abstractmethod
    def event_detected(self, label: str, termination: str, t: float) -> None:
        pass

    @abc.abstractmethod
    def step_rejected_singular(self, label: str, t: float, message: str) -> None:
        pass

    @abc.abstractmethod
    def audit_completed(
        self, label: str, passed: bool, worst_identity: str, worst_residual: float
    ) -> None:
        pass

    @abc.abstractmethod
    def sweep_cell_failed(self, index: int, error: str) -> None:
        pass

    @abc.abstractmethod
    def handling_command_error(self, command: str, exception: Exception) -> None:
        pass


class NullInstrumentation(Instrumentation):
    """Instrumentation that reports nothing. The default for library calls."""

    def integration_started(self, label: str, horizon: float) -> None:
        pass

    def integration_finished(
        self, label: str, termination: str, t_final: float, samples: int
    ) -> None:
        pass

    def event_detected(self, label: str, termination: str, t: float) -> None:
        pass

    def step_rejected_singular(self, label: str, t: float, message: str) -> None:
        pass

    def audit_completed(
        self, label: str, passed: bool, worst_identity: str, worst_residual: float
    ) -> None:
        pass

    def sweep_cell_failed(self, index: int, error: str) -> None:
        pass

    def handling_command_error(self, command: str, exception: Exception) -> None:
        pass


@dataclass
class SimulationInstrumentation(Instrumentation):
    logger: Union[JsonLogger, logging.Logger]

    def integration_started(self, label: str, horizon: float) -> None:
        self.logger.info(
            "Starting integration", extra={"scenario": label, "horizon": horizon}
        )

    def integration_finished(
        self, label: str, termination: str, t_final: float, samples: int
    ) -> None:
        self.logger.info(
            "Integration finished",
            extra={
                "scenario": label,
                "termination": termination,
                "t_final": t_final,
                "samples": samples,
            },
        )

    def event_detected(self, label: str, termination: str, t: float) -> None:
        self.logger.info(
            "Event detected",
            extra={"scenario": label, "termination": termination, "t": t},
        )

    def step_rejected_singular(self, label: str, t: float, message: str) -> None:
        self.logger.warning(
            "Step size underflow, stopping at a singular state",
            extra={"scenario": label, "t": t, "solver_message": message},
        )

    def audit_completed(
        self, label: str, passed: bool, worst_identity: str, worst_residual: float
    ) -> None:
        log = self.logger.info if passed else self.logger.error
        log(
            "Stock-flow audit completed",
            extra={
                "scenario": label,
                "passed": passed,
                "worst_identity": worst_identity,
                "worst_residual": worst_residual,
            },
        )

    def sweep_cell_failed(self, index: int, error: str) -> None:
        self.logger.error(
            "Sweep cell failed", extra={"cell": index, "error": error}
        )

    def handling_command_error(self, command: str, exception: Exception) -> None:
        self.logger.error(
            "An unexpected error happened",
            extra={"command": command},
            exc_info=exception,
        )
