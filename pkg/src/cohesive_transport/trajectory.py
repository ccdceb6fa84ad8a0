"""Reference trajectories for the virtual source.

Two kinds: a raw step and a step smoothed by a first-order low-pass
filter discretized with Tustin's (bilinear) approximation,

    y_d[m] = (2 - wc*dt)/(2 + wc*dt) * y_d[m-1]
           + wc*dt/(2 + wc*dt) * (y_ds[m] + y_ds[m-1]),

where y_ds is the underlying step. The filter has unit DC gain, so the
reference converges to the step amplitude; it gets within 2% after
roughly four filter time constants (4/wc seconds).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:
    from .scenario import ScenarioConfig


@dataclass(frozen=True)
class TrajectorySpec:
    """Reference description: kind is "step" or "filtered_step".

    The step switches on at sample index ``start_index`` (default 1, so
    the reference is zero at m=0). ``cutoff`` is the low-pass cutoff in
    rad/s and only meaningful for filtered steps.
    """

    kind: str
    amplitude: float
    cutoff: float | None = None
    start_index: int = 1

    def __post_init__(self):
        if self.kind not in ("step", "filtered_step"):
            raise ValueError(f"unknown trajectory kind {self.kind!r}")
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")
        if self.start_index < 0:
            raise ValueError("start_index must be >= 0")
        if self.kind == "filtered_step":
            if self.cutoff is None or self.cutoff <= 0:
                raise ValueError("filtered_step requires cutoff > 0")

    def validate_dt(self, dt: float) -> None:
        """Tustin mapping needs wc*dt < 2 to keep the pole inside (-1, 1)."""
        if self.kind == "filtered_step" and self.cutoff * dt >= 2.0:
            raise ValueError(
                f"cutoff*dt = {self.cutoff * dt:.3g} must be < 2 for a valid "
                "Tustin discretization")


def _step_series(spec: TrajectorySpec, num_steps: int) -> np.ndarray:
    y = np.zeros(num_steps + 1)
    y[spec.start_index:] = spec.amplitude
    return y


def reference_series(spec: TrajectorySpec, dt: float, num_steps: int) -> np.ndarray:
    """Reference values y_d[0..num_steps] on the sampling grid."""
    spec.validate_dt(dt)
    steps = _step_series(spec, num_steps)
    if spec.kind == "step":
        return steps
    wd = spec.cutoff * dt
    keep = (2.0 - wd) / (2.0 + wd)
    feed = wd / (2.0 + wd)
    y = np.zeros(num_steps + 1)
    for m in range(1, num_steps + 1):
        y[m] = keep * y[m - 1] + feed * (steps[m] + steps[m - 1])
    return y


def filtered_step(spec: TrajectorySpec, dt: float, m: int) -> float:
    """Single reference value y_d[m]; runs the recursion up to m."""
    if m < 0:
        raise ValueError("sample index must be >= 0")
    return float(reference_series(spec, dt, m)[m])


@dataclass(frozen=True)
class SweepRow:
    omega_c: float
    max_deformation: float
    max_speed: float


def cutoff_sweep(scenario: "ScenarioConfig",
                 omega_c_values: Iterable[float] | Sequence[float]) -> list[SweepRow]:
    """Rerun one scenario across cutoff frequencies.

    Each run keeps everything but the trajectory cutoff fixed and
    reports the peak object deformation and peak commanded speed, the
    two quantities that decide how fast a transport can be driven.
    Rows come back ordered by cutoff.
    """
    from . import metrics
    from .dynamics import simulate

    rows = []
    for wc in sorted(float(w) for w in omega_c_values):
        traj = replace(scenario.trajectory, kind="filtered_step", cutoff=wc)
        trace = simulate(replace(scenario, trajectory=traj))
        deformation = float(np.max(metrics.deformation_series(trace)))
        rows.append(SweepRow(omega_c=wc,
                             max_deformation=deformation,
                             max_speed=metrics.max_speed(trace)))
    return rows
