import abc
import logging
import os
from collections import UserString
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import ClassVar, Mapping


class ConfigurationError(Exception):
    """Raised when an environment variable holds an unusable value"""

    variable: str
    value: str

    def __init__(self, variable: str, value: str, reason: str):
        self.variable = variable
        self.value = value

        super().__init__(f"{variable}={value!r}: {reason}")


@dataclass(eq=False)
class _EnvironmentConfiguration(abc.ABC):
    """Used to fetch configuration from environment variables"""

    parameter_prefix: ClassVar[str] = "NIRP_SFC"
    parameter_name: ClassVar[str]
    default: ClassVar[str]

    environ: Mapping[str, str] = field(default_factory=lambda: os.environ)

    @property
    def variable(self) -> str:
        return f"{self.parameter_prefix}_{self.parameter_name}"

    @property
    def raw(self) -> str:
        return self.environ.get(self.variable, self.default)


class EnvironmentStringConfiguration(_EnvironmentConfiguration, UserString, abc.ABC):
    """Used to fetch string configuration from the environment"""

    @property
    def data(self) -> str:
        return self.raw

    @data.setter
    def data(self, value: str) -> None:
        raise NotImplementedError("Not Allowed")


class EnvironmentIntConfiguration(_EnvironmentConfiguration, abc.ABC):
    """Used to fetch a positive integer from the environment"""

    @cached_property
    def value(self) -> int:
        try:
            value = int(self.raw)
        except ValueError:
            raise ConfigurationError(self.variable, self.raw, "expected an integer")

        if value < 1:
            raise ConfigurationError(self.variable, self.raw, "must be at least 1")

        return value

    def __int__(self) -> int:
        return self.value


class LogLevel(EnvironmentStringConfiguration):
    parameter_name = "LOG_LEVEL"
    default = "INFO"

    @property
    def data(self) -> str:
        return self.raw.upper()

    @data.setter
    def data(self, value: str) -> None:
        raise NotImplementedError("Not Allowed")

    @property
    def level(self) -> int:
        level = logging.getLevelName(self.data)
        if not isinstance(level, int):
            raise ConfigurationError(self.variable, self.raw, "unknown log level")
        return level


class OutputDirectory(EnvironmentStringConfiguration):
    parameter_name = "OUT_DIR"
    default = "out"

    @property
    def path(self) -> Path:
        return Path(self.data)


class WorkerCount(EnvironmentIntConfiguration):
    """Size of the process pool used by sweeps"""

    parameter_name = "WORKERS"
    default = "1"
