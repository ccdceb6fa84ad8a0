"""Discrete-time transport dynamics of the robot network.

Baseline controller: each robot descends its measured force,

    y_k[m+1] = y_k[m] - gamma * (f_k[m] + khat_kd * (y_k[m] - y_d[m])),

which in stacked form is Y[m+1] = (I - gamma K) Y[m] + gamma B y_d[m].

Cohesive controller: the same network additionally reinforces its own
recent motion (delayed self reinforcement), which approximates the
ideal all-leader first-order response without any communication:

    Y[m+1] = Y[m] - a*b*dt K Y[m] + a*b*dt B y_d[m]
             + (I - b K)(Y[m] - Y[m-N]) / N,

with rate gain ``a`` (1/s), reinforcement gain ``b`` (cm/N), and delay
of N samples. Every robot can evaluate its own row of this update from
local measurements only: the row needs y_k, f_k, their N-step-old
values, and y_d if the robot is a leader. Both update laws are
implemented twice, per-robot from local quantities and stacked via K,
and the two are cross-checked on every step in debug runs; that check
is what certifies the laws as decentralized.

Positions are cm, forces N, time s.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import stability
from .errors import DivergenceError
from .network import (CouplingNetwork, PinnedLaplacian, StiffnessChain,
                      build_pinned_laplacian, measured_force, neighbor_forces)
from .trajectory import reference_series

if TYPE_CHECKING:
    from .scenario import ScenarioConfig

Network = StiffnessChain | CouplingNetwork

# Positions beyond this are treated as numerical blow-up, not physics.
DIVERGENCE_LIMIT_CM = 1e9

_CROSSCHECK_ATOL = 1e-12


class UnstableControllerWarning(RuntimeWarning):
    """Configured gains violate the stability conditions; the simulation
    still runs because watching the divergence is often the point."""


@dataclass(frozen=True)
class ControllerConfig:
    """Gains for one controller; ``kind`` is "baseline" or "dsr".

    Baseline uses ``gamma`` (cm/N per step). The cohesive controller
    uses ``alpha`` (1/s), ``beta`` (cm/N), and an integer delay of
    ``delay_multiple`` samples. ``dt`` is the sampling period in s.
    """

    kind: str
    dt: float
    gamma: float | None = None
    alpha: float | None = None
    beta: float | None = None
    delay_multiple: int = 1

    def __post_init__(self):
        if self.dt <= 0 or not math.isfinite(self.dt):
            raise ValueError("dt must be positive")
        if self.kind == "baseline":
            if self.gamma is None or self.gamma <= 0:
                raise ValueError("baseline controller requires gamma > 0")
        elif self.kind == "dsr":
            if self.alpha is None or self.alpha <= 0:
                raise ValueError("dsr controller requires alpha > 0")
            if self.beta is None or self.beta <= 0:
                raise ValueError("dsr controller requires beta > 0")
            if self.delay_multiple < 1:
                raise ValueError("dsr delay_multiple must be >= 1")
        else:
            raise ValueError(f"unknown controller kind {self.kind!r}")

    @classmethod
    def baseline(cls, gamma: float, dt: float) -> "ControllerConfig":
        return cls(kind="baseline", dt=dt, gamma=gamma)

    @classmethod
    def dsr(cls, alpha: float, beta: float, dt: float,
            delay_multiple: int = 1) -> "ControllerConfig":
        return cls(kind="dsr", dt=dt, alpha=alpha, beta=beta,
                   delay_multiple=delay_multiple)


@dataclass
class NetworkState:
    """Positions plus the delay buffer the cohesive update needs.

    ``history`` holds the last ``delay_multiple`` position vectors,
    oldest first, so ``history[0]`` is Y[m-N]. Before N steps have
    elapsed the buffer is padded with the initial positions (system
    starts at rest).
    """

    positions: np.ndarray
    history: tuple[np.ndarray, ...]
    step: int = 0

    @classmethod
    def at_rest(cls, initial_positions, delay_multiple: int = 1) -> "NetworkState":
        y0 = np.asarray(initial_positions, dtype=float).copy()
        return cls(positions=y0, history=(y0.copy(),) * delay_multiple, step=0)

    @property
    def delayed_positions(self) -> np.ndarray:
        return self.history[0]

    def advanced(self, new_positions: np.ndarray) -> "NetworkState":
        return NetworkState(positions=new_positions,
                            history=self.history[1:] + (self.positions,),
                            step=self.step + 1)


@dataclass(frozen=True)
class SimulationTrace:
    """Sampled history of one run; row m is time m*dt.

    ``forces`` are the object forces f_k, ``augmented_forces`` add the
    leaders' virtual-source force, ``speeds`` are the commanded speeds
    (y_k[m+1] - y_k[m])/dt with zeros in the final row. Arrays are
    read-only.
    """

    dt: float
    times: np.ndarray
    positions: np.ndarray
    forces: np.ndarray
    augmented_forces: np.ndarray
    reference: np.ndarray
    speeds: np.ndarray

    def __post_init__(self):
        for field in ("times", "positions", "forces", "augmented_forces",
                      "reference", "speeds"):
            getattr(self, field).flags.writeable = False

    @property
    def n(self) -> int:
        return self.positions.shape[1]

    @property
    def num_samples(self) -> int:
        return self.positions.shape[0]


def baseline_update_forms(positions, laplacian: PinnedLaplacian,
                          network: Network, gamma: float,
                          y_d: float) -> tuple[np.ndarray, np.ndarray]:
    """Next positions computed both ways: (stacked, per-robot)."""
    y = np.asarray(positions, dtype=float)
    stacked = y - gamma * (laplacian.matrix @ y) + gamma * laplacian.leader_vector * y_d
    leaders = network.leader_stiffness
    local = np.array([
        y[k] - gamma * (measured_force(network, y, k) + leaders[k] * (y[k] - y_d))
        for k in range(len(y))
    ])
    return stacked, local


def dsr_update_forms(positions, delayed_positions, laplacian: PinnedLaplacian,
                     network: Network, alpha: float, beta: float, dt: float,
                     delay_multiple: int, y_d: float) -> tuple[np.ndarray, np.ndarray]:
    """Next positions via the stacked law and via local measurements.

    The per-robot route touches nothing global: each robot combines its
    own position and force, their N-step-old values, and (for leaders)
    the reference.
    """
    y = np.asarray(positions, dtype=float)
    y_old = np.asarray(delayed_positions, dtype=float)
    k_mat = laplacian.matrix
    rate = alpha * beta * dt
    delta = y - y_old
    stacked = (y - rate * (k_mat @ y) + rate * laplacian.leader_vector * y_d
               + (delta - beta * (k_mat @ delta)) / delay_multiple)

    leaders = network.leader_stiffness
    local = np.empty_like(y)
    for k in range(len(y)):
        f_now = measured_force(network, y, k)
        f_old = measured_force(network, y_old, k)
        reinforcement = ((1.0 - beta * leaders[k]) * (y[k] - y_old[k])
                         - beta * (f_now - f_old)) / delay_multiple
        local[k] = (y[k] - rate * f_now + rate * leaders[k] * (y_d - y[k])
                    + reinforcement)
    return stacked, local


def _crosscheck(stacked: np.ndarray, local: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(stacked))))
    assert float(np.max(np.abs(stacked - local))) <= _CROSSCHECK_ATOL * scale, \
        "per-robot and stacked updates disagree"


def step_baseline(state: NetworkState, laplacian: PinnedLaplacian,
                  network: Network, config: ControllerConfig,
                  y_d: float) -> np.ndarray:
    """One baseline update; returns the next position vector."""
    stacked, local = baseline_update_forms(state.positions, laplacian, network,
                                           config.gamma, y_d)
    _crosscheck(stacked, local)
    return stacked


def step_dsr(state: NetworkState, laplacian: PinnedLaplacian,
             network: Network, config: ControllerConfig,
             y_d: float) -> np.ndarray:
    """One cohesive update; returns the next position vector."""
    stacked, local = dsr_update_forms(state.positions, state.delayed_positions,
                                      laplacian, network, config.alpha,
                                      config.beta, config.dt,
                                      config.delay_multiple, y_d)
    _crosscheck(stacked, local)
    return stacked


def _warn_if_unstable(laplacian: PinnedLaplacian, config: ControllerConfig) -> None:
    if config.kind == "baseline":
        bound = stability.baseline_gamma_bound(laplacian)
        if not config.gamma < bound:
            warnings.warn(
                f"gamma = {config.gamma:.6g} is at or above the stable bound "
                f"{bound:.6g}; simulating anyway", UnstableControllerWarning,
                stacklevel=3)
    else:
        if not stability.closed_form_stable(laplacian, config.alpha, config.beta,
                                       config.dt):
            warnings.warn(
                f"(alpha, beta) = ({config.alpha:.6g}, {config.beta:.6g}) "
                "violates the stability conditions; simulating anyway",
                UnstableControllerWarning, stacklevel=3)


def num_steps(duration: float, dt: float) -> int:
    """Samples after t=0 covering ``duration``: ceil with a guard against
    float noise in duration/dt ratios like 60/0.03."""
    return math.ceil(duration / dt - 1e-9)


def simulate(scenario: "ScenarioConfig") -> SimulationTrace:
    """Run one scenario from the undeformed rest configuration.

    The trace covers samples m = 0 .. ceil(duration/dt) and is a pure
    function of the scenario: identical inputs give bitwise identical
    traces. Unstable gains only raise UnstableControllerWarning;
    positions beyond DIVERGENCE_LIMIT_CM (or non-finite) abort with
    DivergenceError.
    """
    network = scenario.network
    laplacian = build_pinned_laplacian(network)
    config = scenario.controller
    dt = config.dt
    steps = num_steps(scenario.duration, dt)
    reference = reference_series(scenario.trajectory, dt, steps)

    _warn_if_unstable(laplacian, config)
    stepper = step_baseline if config.kind == "baseline" else step_dsr

    state = NetworkState.at_rest(np.zeros(laplacian.n), config.delay_multiple)
    positions = np.empty((steps + 1, laplacian.n))
    positions[0] = state.positions
    for m in range(steps):
        nxt = stepper(state, laplacian, network, config, reference[m])
        if not np.all(np.isfinite(nxt)) or np.max(np.abs(nxt)) > DIVERGENCE_LIMIT_CM:
            raise DivergenceError(step=m + 1)
        state = state.advanced(nxt)
        positions[m + 1] = nxt

    forces = neighbor_forces(laplacian, positions)
    augmented = forces + laplacian.leader_vector * (positions - reference[:, None])
    speeds = np.zeros_like(positions)
    speeds[:-1] = np.diff(positions, axis=0) / dt
    times = np.arange(steps + 1) * dt
    return SimulationTrace(dt=dt, times=times, positions=positions,
                           forces=forces, augmented_forces=augmented,
                           reference=reference, speeds=speeds)
