"""Event detection in this package is a chain of detectors that look at the
samples accepted so far and report the first qualitative outcome that fired.

"""
import abc
import bisect
import enum
from dataclasses import dataclass, field
from typing import ClassVar, Optional, Sequence

import numpy as np

from nirp_sfc.model.system import CORE_DIMENSION


class Termination(str, enum.Enum):
    """Why a trajectory stopped"""

    HORIZON_REACHED = "HorizonReached"
    CONVERGED = "ConvergedToEquilibrium"
    DEBT_BLOWUP = "DebtBlowup"
    COLLAPSE = "CollapseToZero"
    SINGULAR = "SingularState"


class NoDetectorsError(Exception):
    """Raised when a monitor is used without any detectors."""

    def __init__(self) -> None:
        super().__init__("No detectors found in the monitor.")


class DuplicateDetectorsError(Exception):
    """Raised when a monitor is given two detectors for the same event."""

    def __init__(self, termination: Termination) -> None:
        self.termination = termination

        super().__init__(f"Duplicate detectors found for {termination.value}.")


class EventDetector(abc.ABC):
    """Maps the accepted samples of a run to a termination."""

    termination: ClassVar[Termination]
    """The termination reported when the detector fires."""

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EventDetector) and self.has_same_event(other)

    def has_same_event(self, other: "EventDetector") -> bool:
        return self.termination == other.termination

    @abc.abstractmethod
    def fires(self, times: Sequence[float], states: Sequence[np.ndarray]) -> bool:
        """Whether the event happened at the last accepted sample"""
        pass


@dataclass(eq=False)
class DebtBlowupDetector(EventDetector):
    """Fires once the private debt ratio exceeds its threshold."""

    termination = Termination.DEBT_BLOWUP

    threshold: float

    def fires(self, times: Sequence[float], states: Sequence[np.ndarray]) -> bool:
        ell = states[-1][2]
        return bool(ell > self.threshold or not np.isfinite(ell))


@dataclass(eq=False)
class CollapseDetector(EventDetector):
    """Fires once both the wage share and employment fall below the threshold."""

    termination = Termination.COLLAPSE

    threshold: float

    def fires(self, times: Sequence[float], states: Sequence[np.ndarray]) -> bool:
        omega, lam = states[-1][0], states[-1][1]
        return bool(omega < self.threshold and lam < self.threshold)


@dataclass(eq=False)
class ConvergenceDetector(EventDetector):
    """Fires once the core state has stayed put over a trailing window.

    The spread is the largest max-minus-min over the five core coordinates of
    the samples inside the window.
    """

    termination = Termination.CONVERGED

    window: float
    tolerance: float

    def fires(self, times: Sequence[float], states: Sequence[np.ndarray]) -> bool:
        t_end = times[-1]
        if t_end - times[0] < self.window:
            return False

        start = bisect.bisect_left(times, t_end - self.window)
        recent = np.asarray(states[start:])[:, :CORE_DIMENSION]

        spread = np.max(recent.max(axis=0) - recent.min(axis=0))
        return bool(spread < self.tolerance)


@dataclass
class EventMonitor:
    """Checks detectors in order and reports the first one that fires.

    Detectors are mutually exclusive per sample because only the first match
    is reported.
    """

    _detectors: list[EventDetector] = field(default_factory=list)
    """The detectors the monitor will check, in priority order"""

    def __call__(
        self, times: Sequence[float], states: Sequence[np.ndarray]
    ) -> Optional[Termination]:
        if len(self._detectors) == 0:
            raise NoDetectorsError()

        for detector in self._detectors:
            if detector.fires(times, states):
                return detector.termination

        return None

    def add_detector(self, detector: EventDetector) -> None:
        """Add a detector to the monitor."""
        if any(detector == d for d in self._detectors):
            raise DuplicateDetectorsError(detector.termination)

        self._detectors.append(detector)
