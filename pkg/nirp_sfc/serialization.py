"""Reading and writing trajectories, audits, equilibria and sweep grids.

Floats are written with 17 significant digits and read back with pandas'
round-trip parser, so a written file reproduces the in-memory values exactly.
"""
import enum
import json
import math
from pathlib import Path
from typing import Any, Sequence, Union

import numpy as np
import pandas as pd

from nirp_sfc.events import Termination
from nirp_sfc.integrator import Trajectory
from nirp_sfc.model.errors import ContractViolation
from nirp_sfc.model.params import ModelParams
from nirp_sfc.scenarios.runner import FINAL_FIELDS, SweepCell

TRAJECTORY_COLUMNS = (
    "t",
    "omega",
    "lambda",
    "ell",
    "rho",
    "r_g",
    "b",
    "p",
    "Y",
    "pi",
    "inflation",
    "g_K",
    "termination",
)
STATE_COLUMNS = TRAJECTORY_COLUMNS[1:9]
FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


class TrajectoryFormatError(Exception):
    """Raised when a trajectory file cannot be parsed"""

    path: str

    def __init__(self, path: PathLike, reason: str):
        self.path = str(path)

        super().__init__(f"{path}: {reason}")


class OutputWriteError(Exception):
    """Raised when an output file cannot be written"""

    path: str

    def __init__(self, path: PathLike, reason: str):
        self.path = str(path)

        super().__init__(f"Could not write {path}: {reason}")


class NumpyJSONEncoder(json.JSONEncoder):
    def default(self, o: Any) -> Any:
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        if isinstance(o, complex):
            return [o.real, o.imag]
        if isinstance(o, enum.Enum):
            return o.value
        if isinstance(o, (set, tuple)):
            return list(o)

        return super().default(o)


def dumps(document: Any) -> str:
    """Stable JSON text for a document"""
    return json.dumps(document, cls=NumpyJSONEncoder, indent=2, sort_keys=True) + "\n"


def _write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise OutputWriteError(path, e.strerror or str(e)) from e
    return path


def write_json(path: PathLike, document: Any) -> Path:
    return _write_text(path, dumps(document))


def trajectory_frame(trajectory: Trajectory) -> pd.DataFrame:
    frame = pd.DataFrame(trajectory.states, columns=list(STATE_COLUMNS))
    frame.insert(0, "t", trajectory.times)
    frame["pi"] = trajectory.profit_share
    frame["inflation"] = trajectory.inflation
    frame["g_K"] = trajectory.capital_growth
    frame["termination"] = trajectory.termination.value
    return frame


def write_trajectory_csv(trajectory: Trajectory, path: PathLike) -> Path:
    """One row per sample, with the termination repeated on every row"""
    text = trajectory_frame(trajectory).to_csv(
        index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    return _write_text(path, text)


def write_trajectory_json(trajectory: Trajectory, path: PathLike) -> Path:
    frame = trajectory_frame(trajectory)
    document = {
        "label": trajectory.label,
        "termination": trajectory.termination.value,
        "columns": list(TRAJECTORY_COLUMNS[:-1]),
        "rows": frame[list(TRAJECTORY_COLUMNS[:-1])].to_numpy().tolist(),
    }
    return write_json(path, document)


def _trajectory_from_frame(
    frame: pd.DataFrame,
    termination: Any,
    params: ModelParams,
    path: PathLike,
    label: str,
) -> Trajectory:
    try:
        termination = Termination(termination)
    except ValueError:
        raise TrajectoryFormatError(path, f"unknown termination {termination!r}")

    values = frame[["t", *STATE_COLUMNS]].to_numpy(dtype=float)
    if not np.all(np.isfinite(values)):
        row = int(np.argwhere(~np.isfinite(values))[0][0])
        raise TrajectoryFormatError(path, f"non-numeric value in data row {row + 1}")

    try:
        return Trajectory(
            params=params,
            times=values[:, 0],
            states=values[:, 1:],
            termination=termination,
            label=label,
        )
    except ContractViolation as e:
        raise TrajectoryFormatError(path, str(e)) from e


def read_trajectory_csv(
    path: PathLike, params: ModelParams, label: str = ""
) -> Trajectory:
    """Parse a trajectory CSV written by `write_trajectory_csv`

    :raises TrajectoryFormatError: If the header or any value is malformed
    """
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except FileNotFoundError:
        raise TrajectoryFormatError(path, "no such file")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise TrajectoryFormatError(path, str(e)) from e

    if tuple(frame.columns) != TRAJECTORY_COLUMNS:
        raise TrajectoryFormatError(
            path, f"expected header {','.join(TRAJECTORY_COLUMNS)}"
        )
    if frame.empty:
        raise TrajectoryFormatError(path, "no samples")

    numeric = frame[["t", *STATE_COLUMNS]].apply(pd.to_numeric, errors="coerce")
    return _trajectory_from_frame(
        numeric, frame["termination"].iloc[-1], params, path, label
    )


def read_trajectory_json(
    path: PathLike, params: ModelParams, label: str = ""
) -> Trajectory:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
        frame = pd.DataFrame(document["rows"], columns=document["columns"])
        termination = document["termination"]
    except FileNotFoundError:
        raise TrajectoryFormatError(path, "no such file")
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise TrajectoryFormatError(path, f"malformed trajectory document: {e}") from e

    missing = set(TRAJECTORY_COLUMNS[:-1]) - set(frame.columns)
    if missing:
        raise TrajectoryFormatError(
            path, f"missing columns {', '.join(sorted(missing))}"
        )
    if frame.empty:
        raise TrajectoryFormatError(path, "no samples")

    numeric = frame[["t", *STATE_COLUMNS]].apply(pd.to_numeric, errors="coerce")
    return _trajectory_from_frame(numeric, termination, params, path, label)


def read_trajectory(path: PathLike, params: ModelParams, label: str = "") -> Trajectory:
    if Path(path).suffix == ".json":
        return read_trajectory_json(path, params, label)
    return read_trajectory_csv(path, params, label)


def sweep_frame(cells: Sequence[SweepCell]) -> pd.DataFrame:
    records = []
    for cell in cells:
        record: dict[str, Any] = {"index": cell.index, **cell.coordinates}
        record["termination"] = (
            "" if cell.termination is None else cell.termination.value
        )
        record["min_policy_rate"] = cell.min_policy_rate
        record.update(
            {name: cell.final.get(name, math.nan) for name in FINAL_FIELDS}
        )
        record["error"] = cell.error or ""
        records.append(record)

    return pd.DataFrame.from_records(records)


def write_sweep_csv(cells: Sequence[SweepCell], path: PathLike) -> Path:
    text = sweep_frame(cells).to_csv(
        index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    return _write_text(path, text)


def write_sweep_json(cells: Sequence[SweepCell], path: PathLike) -> Path:
    return write_json(
        path,
        [
            {
                "index": cell.index,
                "coordinates": cell.coordinates,
                "termination": None
                if cell.termination is None
                else cell.termination.value,
                "min_policy_rate": None
                if math.isnan(cell.min_policy_rate)
                else cell.min_policy_rate,
                "final": cell.final,
                "error": cell.error,
            }
            for cell in cells
        ],
    )
