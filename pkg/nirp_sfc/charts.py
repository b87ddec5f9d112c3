import io
from pathlib import Path
from typing import Union

import matplotlib
from matplotlib.figure import Figure

from nirp_sfc.integrator import Trajectory
from nirp_sfc.serialization import OutputWriteError

SVG_RC = {
    "svg.hashsalt": "nirp-sfc",
    "svg.fonttype": "none",
    "path.simplify": False,
}


class EmptyTrajectoryError(Exception):
    def __init__(self, label: str):
        self.label = label

        super().__init__(f"Trajectory {label or '<unnamed>'} has no samples to plot")


def build_figure(trajectory: Trajectory) -> Figure:
    """Four panels: shares, debt ratios, interest rates, output and inflation.

    Every curve carries a gid, which the SVG backend writes as the element id.
    """
    if len(trajectory) == 0:
        raise EmptyTrajectoryError(trajectory.label)

    t = trajectory.times
    figure = Figure(figsize=(10, 7))
    (shares, debts), (rates, output) = figure.subplots(2, 2, sharex=True)

    shares.plot(t, trajectory.omega, label="wage share ω", gid="omega")
    shares.plot(t, trajectory.employment, label="employment rate λ", gid="lambda")
    shares.legend(loc="best")

    debts.plot(t, trajectory.private_debt, label="private debt ℓ", gid="ell")
    debts.plot(t, trajectory.gov_debt, label="public debt b", gid="b")
    debts.legend(loc="best")

    rates.plot(t, trajectory.policy_rate, label="policy rate r_g", gid="r_g")
    rates.plot(t, trajectory.target_rate, label="target rate ρ", gid="rho")
    rates.axhline(0.0, color="grey", linewidth=0.5)
    rates.legend(loc="best")
    rates.set_xlabel("years")

    output.plot(t, trajectory.real_output, label="real output Y", gid="Y")
    output.set_yscale("log")
    deflator = output.twinx()
    deflator.plot(
        t, trajectory.inflation, label="inflation", color="tab:red", gid="inflation"
    )
    handles = output.get_lines() + deflator.get_lines()
    output.legend(handles, [line.get_label() for line in handles], loc="best")
    output.set_xlabel("years")

    figure.suptitle(
        f"{trajectory.label or 'trajectory'}: {trajectory.termination.value} "
        f"at t = {t[-1]:.1f}"
    )
    return figure


def render_svg(trajectory: Trajectory) -> bytes:
    """Standalone SVG of the trajectory, identical bytes for identical input"""
    buffer = io.BytesIO()
    with matplotlib.rc_context(SVG_RC):
        figure = build_figure(trajectory)
        figure.savefig(buffer, format="svg", metadata={"Date": None})

    return buffer.getvalue()


def write_svg(trajectory: Trajectory, path: Union[str, Path]) -> Path:
    path = Path(path)
    content = render_svg(trajectory)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(content)
    except OSError as e:
        raise OutputWriteError(path, e.strerror or str(e)) from e
    return path
