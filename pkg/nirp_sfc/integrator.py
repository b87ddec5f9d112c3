"""Time stepping of the joint system with adaptive error control.

Runs are stepped one accepted step at a time with one of scipy's embedded
Runge-Kutta pairs, and the event monitor is consulted after every accepted
step. Every accepted step becomes a sample of the trajectory.
"""
import dataclasses
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Optional, Sequence

import numpy as np
from scipy.integrate import DOP853, RK23, RK45, OdeSolver, solve_ivp

from nirp_sfc.events import (
    CollapseDetector,
    ConvergenceDetector,
    DebtBlowupDetector,
    EventMonitor,
    Termination,
)
from nirp_sfc.instrumentation import Instrumentation, NullInstrumentation
from nirp_sfc.model.errors import ContractViolation, ModelError
from nirp_sfc.model.params import FixedRate, ModelParams
from nirp_sfc.model.state import AuxState, CoreState, DerivedObservables
from nirp_sfc.model.system import (
    CORE_DIMENSION,
    JOINT_DIMENSION,
    derived,
    joint_rhs,
)

METHODS: dict[str, type[OdeSolver]] = {"RK23": RK23, "RK45": RK45, "DOP853": DOP853}

# accepted steps shorter than this fraction of t do not advance the run
STALLED_STEP = 1e-12


class InvalidSettingsError(Exception):
    """Raised when solver settings break one of their invariants"""

    field: str

    def __init__(self, field: str, reason: str):
        self.field = field

        super().__init__(f"Invalid solver setting {field}: {reason}")


@dataclass(frozen=True)
class SolverSettings:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-11

    initial_step: Optional[float] = None
    """First step in years, chosen by the solver when unset"""

    max_step: float = 0.5
    """Largest step in years, which also bounds the sample spacing"""

    horizon: float = 300.0
    blowup_threshold: float = 1e6
    collapse_threshold: float = 1e-6

    convergence_window: float = 10.0
    """Length in years of the trailing window used to detect convergence"""

    convergence_tol: float = 1e-5
    method: str = "DOP853"

    def __post_init__(self) -> None:
        for name in (
            "rel_tol",
            "abs_tol",
            "max_step",
            "horizon",
            "blowup_threshold",
            "collapse_threshold",
            "convergence_window",
            "convergence_tol",
        ):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not value > 0:
                raise InvalidSettingsError(name, f"must be positive, got {value!r}")
        if self.initial_step is not None and not self.initial_step > 0:
            raise InvalidSettingsError("initial_step", "must be positive")
        if self.method not in METHODS:
            raise InvalidSettingsError(
                "method", f"expected one of {', '.join(sorted(METHODS))}"
            )

    def with_overrides(self, **overrides: Any) -> "SolverSettings":
        return dataclasses.replace(self, **overrides)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SolverSettings":
        known = {item.name for item in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidSettingsError(", ".join(sorted(unknown)), "unknown setting")

        return cls(**data)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def monitor(self) -> EventMonitor:
        monitor = EventMonitor()
        monitor.add_detector(DebtBlowupDetector(threshold=self.blowup_threshold))
        monitor.add_detector(CollapseDetector(threshold=self.collapse_threshold))
        monitor.add_detector(
            ConvergenceDetector(
                window=self.convergence_window, tolerance=self.convergence_tol
            )
        )
        return monitor


@dataclass(frozen=True)
class Sample:
    t: float
    core: CoreState
    aux: AuxState
    observables: DerivedObservables


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples of a run, stored column-wise.

    `states` has one row per sample laid out as
    ``(omega, lambda, ell, rho, r_g, b, p, Y)``.
    """

    params: ModelParams
    times: np.ndarray
    states: np.ndarray
    termination: Termination
    label: str = ""

    def __post_init__(self) -> None:
        if self.states.ndim != 2 or self.states.shape[1] != JOINT_DIMENSION:
            raise ContractViolation(f"states must be (n, 8), got {self.states.shape}")
        if len(self.times) != len(self.states):
            raise ContractViolation("times and states differ in length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ContractViolation("sample times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def omega(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def employment(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def private_debt(self) -> np.ndarray:
        return self.states[:, 2]

    @property
    def target_rate(self) -> np.ndarray:
        return self.states[:, 3]

    @property
    def policy_rate(self) -> np.ndarray:
        return self.states[:, 4]

    @property
    def gov_debt(self) -> np.ndarray:
        return self.states[:, 5]

    @property
    def price_level(self) -> np.ndarray:
        return self.states[:, 6]

    @property
    def real_output(self) -> np.ndarray:
        return self.states[:, 7]

    @property
    def lending_rate(self) -> np.ndarray:
        if isinstance(self.params.policy_mode, FixedRate):
            return np.full(len(self), self.params.policy_mode.rate)
        return self.policy_rate + self.params.loan_spread

    @property
    def profit_share(self) -> np.ndarray:
        return (
            1
            - self.omega
            - self.params.tax_share
            - self.lending_rate * self.private_debt
        )

    @property
    def inflation(self) -> np.ndarray:
        return self.params.inflation_relax * (self.params.markup * self.omega - 1)

    @property
    def capital_growth(self) -> np.ndarray:
        kappa = self.params.inv_const + np.exp(
            self.params.inv_shift + self.params.inv_slope * self.profit_share
        )
        return kappa / self.params.capital_output - self.params.depreciation

    def sample(self, index: int) -> Sample:
        row = self.states[index]
        core = CoreState.from_array(row[:CORE_DIMENSION])

        return Sample(
            t=float(self.times[index]),
            core=core,
            aux=AuxState.from_array(row[CORE_DIMENSION:]),
            observables=derived(core, self.params),
        )

    def samples(self) -> Iterator[Sample]:
        for index in range(len(self)):
            yield self.sample(index)

    @property
    def initial(self) -> Sample:
        return self.sample(0)

    @property
    def final(self) -> Sample:
        return self.sample(len(self) - 1)

    def tail(self, fraction: float) -> "Trajectory":
        """The samples inside the last `fraction` of the simulated time span"""
        start_time = self.times[-1] - fraction * (self.times[-1] - self.times[0])
        start = int(np.searchsorted(self.times, start_time, side="left"))
        return dataclasses.replace(
            self, times=self.times[start:], states=self.states[start:]
        )


class _GuardedRhs:
    """Right-hand side that turns singular states into rejected steps.

    The last model error raised since the previous accepted step is kept so
    the stepping loop can tell a stalled solver from a slow one.
    """

    def __init__(self, params: ModelParams):
        self.params = params
        self.last_error: Optional[Exception] = None

    def __call__(self, _: float, y: np.ndarray) -> np.ndarray:
        try:
            return joint_rhs(y, self.params)
        except (ModelError, OverflowError) as e:
            self.last_error = e
            return np.full(JOINT_DIMENSION, np.nan)


def _stalled(solver: OdeSolver, rhs: _GuardedRhs) -> bool:
    """Whether the last accepted step was negligible next to a failing rhs"""
    step = solver.step_size
    if rhs.last_error is None or step is None:
        return False
    return step < STALLED_STEP * max(1.0, abs(solver.t))


def integrate(
    core: CoreState,
    aux: AuxState,
    params: ModelParams,
    settings: SolverSettings = SolverSettings(),
    instrumentation: Instrumentation = NullInstrumentation(),
    label: str = "",
) -> Trajectory:
    """Integrate the joint system until an event fires or the horizon is reached.

    Debt blow-up, collapse and step-size underflow are outcomes recorded on the
    trajectory, not errors.

    :raises ContractViolation: If the initial state breaks its invariants
    """
    core.validate()
    aux.validate()

    y0 = np.concatenate([core.as_array(), aux.as_array()])
    monitor = settings.monitor()
    rhs = _GuardedRhs(params)
    solver = METHODS[settings.method](
        rhs,
        0.0,
        y0,
        settings.horizon,
        max_step=settings.max_step,
        rtol=settings.rel_tol,
        atol=settings.abs_tol,
        first_step=settings.initial_step,
    )

    instrumentation.integration_started(label, settings.horizon)

    times: list[float] = [0.0]
    states: list[np.ndarray] = [y0]
    termination = Termination.HORIZON_REACHED

    while solver.status == "running":
        message = solver.step()

        if solver.status == "failed":
            termination = Termination.SINGULAR
            instrumentation.step_rejected_singular(label, solver.t, str(message))
            break

        if not np.all(np.isfinite(solver.y)):
            termination = Termination.SINGULAR
            instrumentation.step_rejected_singular(label, solver.t, "non-finite state")
            break

        if _stalled(solver, rhs):
            termination = Termination.SINGULAR
            instrumentation.step_rejected_singular(label, solver.t, str(rhs.last_error))
            break
        rhs.last_error = None

        times.append(float(solver.t))
        states.append(solver.y.copy())

        event = monitor(times, states)
        if event is not None:
            termination = event
            instrumentation.event_detected(label, event.value, times[-1])
            break

    trajectory = Trajectory(
        params=params,
        times=np.array(times),
        states=np.vstack(states),
        termination=termination,
        label=label,
    )

    instrumentation.integration_finished(
        label, termination.value, times[-1], len(times)
    )

    return trajectory


def infer_policy_rate(trajectory: Trajectory, window: float = 10.0) -> float:
    """Mean policy rate over the trailing window of a converged trajectory"""
    start = int(
        np.searchsorted(trajectory.times, trajectory.times[-1] - window, side="left")
    )
    return float(np.mean(trajectory.policy_rate[start:]))


def fixed_step_rk4(
    fun: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t_end: float,
    n_steps: int,
) -> np.ndarray:
    """Classical fourth-order Runge-Kutta with a constant step"""
    h = t_end / n_steps
    t = 0.0
    y = np.array(y0, dtype=float)

    for _ in range(n_steps):
        k1 = fun(t, y)
        k2 = fun(t + h / 2, y + h / 2 * k1)
        k3 = fun(t + h / 2, y + h / 2 * k2)
        k4 = fun(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h

    return y


def measured_order(
    fun: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t_end: float,
    reference: np.ndarray,
    steps: Sequence[int] = (50, 100, 200),
) -> float:
    """Empirical convergence order of fixed-step RK4 against a reference solution.

    The order is the least-squares slope of log error against log step size.
    """
    errors = np.array(
        [
            np.max(np.abs(fixed_step_rk4(fun, y0, t_end, n) - reference))
            for n in steps
        ]
    )
    if np.any(errors == 0):
        return math.inf

    step_sizes = t_end / np.asarray(steps, dtype=float)
    slope, _ = np.polyfit(np.log(step_sizes), np.log(errors), 1)
    return float(slope)


def convergence_order_check(
    params: ModelParams,
    core: CoreState,
    aux: AuxState,
    t_end: float = 10.0,
    steps: Sequence[int] = (50, 100, 200),
) -> float:
    """Measured order of fixed-step RK4 on the model over [0, t_end].

    The reference is a tight-tolerance run of the DOP853 pair.
    """
    fun = _GuardedRhs(params)
    y0 = np.concatenate([core.as_array(), aux.as_array()])

    reference = solve_ivp(
        fun, (0.0, t_end), y0, method="DOP853", rtol=1e-13, atol=1e-15
    )
    if not reference.success:
        raise ContractViolation(f"reference run failed: {reference.message}")

    return measured_order(fun, y0, t_end, reference.y[:, -1], steps)
