import abc
import argparse
import sys
from dataclasses import dataclass
from typing import ClassVar, Optional, Type

from nirp_sfc.instrumentation import Instrumentation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_PREDICATE = 3


@dataclass
class CommandHandler(abc.ABC):
    """A subcommand of the command line"""

    name: ClassVar[str]
    help: ClassVar[str]

    allowed_errors: ClassVar[dict[Type[Exception], int]] = {}
    """Exit codes for expected failures. Subclasses of a key match too."""

    instrumentation: Instrumentation

    @classmethod
    @abc.abstractmethod
    def configure(cls, parser: argparse.ArgumentParser) -> None:
        """Add the command's arguments"""
        pass

    @abc.abstractmethod
    def handler(self, arguments: argparse.Namespace) -> int:
        """The command's logic, returning the exit code"""
        pass

    def _exit_code(self, exception: Exception) -> Optional[int]:
        for error_type in type(exception).__mro__:
            if error_type in self.allowed_errors:
                return self.allowed_errors[error_type]
        return None

    def handle_error(self, exception: Exception) -> int:
        exit_code = self._exit_code(exception)

        if exit_code is None:
            self.instrumentation.handling_command_error(self.name, exception)
            sys.stderr.write(f"{self.name}: an unexpected error happened\n")
            return EXIT_NUMERICAL

        message = str(exception).strip("'")
        sys.stderr.write(f"{self.name}: {type(exception).__name__}: {message}\n")
        return exit_code

    def __call__(self, arguments: argparse.Namespace) -> int:
        try:
            return self.handler(arguments)
        except Exception as e:
            return self.handle_error(e)
