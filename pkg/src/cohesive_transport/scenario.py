"""Scenario configs: one file fully describes one run.

Flat INI-style files with four sections. Robot numbering in files is
1-based because that is how the lab talks about them; everything
in-memory is 0-based.

    [network]
    robots = 4
    neighbor_stiffness = 0.05, 0.05, 0.05    # chain springs, N/cm
    leader_stiffness = 0.05, 0, 0, 0         # virtual source, N/cm
    # or, for non-chain objects:  couplings = 1-2: 0.05, 2-3: 0.05, ...

    [controller]
    kind = baseline          # or dsr
    gamma = 1.93             # baseline only
    # alpha = 0.39, beta = 10.92, delay_multiple = 1   (dsr)
    dt = 0.03                # s

    [trajectory]
    kind = filtered_step     # or step
    amplitude = 50.0         # cm
    cutoff = 0.1             # rad/s, filtered_step only
    start_index = 1

    [run]
    duration = 60.0          # s
    label = chain4-baseline
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from pathlib import Path

from .dynamics import ControllerConfig
from .errors import ConfigError, UnpinnedNetworkError
from .network import CouplingNetwork, StiffnessChain, build_pinned_laplacian
from .trajectory import TrajectorySpec


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one run needs: network, controller, reference, length."""

    network: StiffnessChain | CouplingNetwork
    controller: ControllerConfig
    trajectory: TrajectorySpec
    duration: float
    label: str = ""
    out_dir: str | None = None


def _parse_floats(raw: str) -> list[float]:
    return [float(part) for part in raw.split(",") if part.strip()]


def _parse_couplings(raw: str) -> dict[tuple[int, int], float]:
    couplings = {}
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        pair, _, value = item.partition(":")
        i_str, _, j_str = pair.partition("-")
        i, j = int(i_str) - 1, int(j_str) - 1  # file is 1-based
        couplings[(i, j)] = float(value)
    return couplings


class _SectionReader:
    """Pulls typed values out of one section, recording every problem
    with its section.key path instead of stopping at the first."""

    def __init__(self, parser: configparser.ConfigParser, section: str,
                 problems: list[str]):
        self.section = section
        self.problems = problems
        self.present = parser.has_section(section)
        self.raw = dict(parser[section]) if self.present else {}
        if not self.present:
            problems.append(f"{section}: missing section")

    def get(self, key: str, convert, required: bool = True, default=None):
        if key not in self.raw:
            if required and self.present:
                self.problems.append(f"{self.section}.{key}: missing")
            return default
        try:
            return convert(self.raw[key])
        except (ValueError, TypeError) as exc:
            self.problems.append(f"{self.section}.{key}: {exc}")
            return default


def load_config(path) -> ScenarioConfig:
    """Parse and fully validate a scenario file.

    Raises ConfigError carrying every violation found, one per line,
    each prefixed with its section.key path.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    text = Path(path).read_text()
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"parse error in {path}: {exc}") from exc

    problems: list[str] = []
    net = _SectionReader(parser, "network", problems)
    ctl = _SectionReader(parser, "controller", problems)
    trj = _SectionReader(parser, "trajectory", problems)
    run = _SectionReader(parser, "run", problems)

    network = None
    robots = net.get("robots", int)
    leaders = net.get("leader_stiffness", _parse_floats)
    if net.present and robots is not None and leaders is not None:
        try:
            if "couplings" in net.raw:
                network = CouplingNetwork(n=robots,
                                          couplings=_parse_couplings(net.raw["couplings"]),
                                          leader_stiffness=tuple(leaders))
            else:
                neighbor = net.get("neighbor_stiffness", _parse_floats)
                if neighbor is not None:
                    network = StiffnessChain(neighbor_stiffness=tuple(neighbor),
                                             leader_stiffness=tuple(leaders))
                    if network.n != robots:
                        problems.append(
                            f"network.robots: {robots} does not match the "
                            f"{network.n} robots implied by the stiffness lists")
        except ValueError as exc:
            problems.append(f"network: {exc}")

    controller = None
    kind = ctl.get("kind", str)
    dt = ctl.get("dt", float)
    if ctl.present and kind is not None and dt is not None:
        try:
            if kind == "baseline":
                controller = ControllerConfig.baseline(ctl.get("gamma", float), dt)
            elif kind == "dsr":
                controller = ControllerConfig.dsr(
                    ctl.get("alpha", float), ctl.get("beta", float), dt,
                    ctl.get("delay_multiple", int, required=False, default=1))
            else:
                problems.append(f"controller.kind: unknown kind {kind!r}")
        except (ValueError, TypeError) as exc:
            problems.append(f"controller: {exc}")

    trajectory = None
    tkind = trj.get("kind", str)
    if trj.present and tkind is not None:
        try:
            trajectory = TrajectorySpec(
                kind=tkind,
                amplitude=trj.get("amplitude", float, default=math.nan),
                cutoff=trj.get("cutoff", float, required=(tkind == "filtered_step")),
                start_index=trj.get("start_index", int, required=False, default=1))
        except (ValueError, TypeError) as exc:
            problems.append(f"trajectory: {exc}")

    duration = run.get("duration", float)
    label = run.get("label", str, required=False, default="")
    out_dir = run.get("out_dir", str, required=False)

    if network is not None:
        try:
            build_pinned_laplacian(network)
        except UnpinnedNetworkError as exc:
            problems.append(f"network.leader_stiffness: {exc}")
    if trajectory is not None and controller is not None:
        try:
            trajectory.validate_dt(controller.dt)
        except ValueError as exc:
            problems.append(f"trajectory.cutoff: {exc}")
    if duration is not None:
        if duration <= 0:
            problems.append("run.duration: must be positive")
        elif trajectory is not None and controller is not None:
            horizon = trajectory.start_index * controller.dt
            if trajectory.kind == "filtered_step" and trajectory.cutoff:
                horizon += 4.0 / trajectory.cutoff
            if duration < horizon:
                problems.append(
                    f"run.duration: {duration:g} s is shorter than the "
                    f"trajectory horizon {horizon:g} s")

    if problems:
        raise ConfigError("invalid scenario config:\n  " + "\n  ".join(problems))
    return ScenarioConfig(network=network, controller=controller,
                          trajectory=trajectory, duration=duration,
                          label=label, out_dir=out_dir)


def write_config(scenario: ScenarioConfig, path) -> None:
    """Serialize a scenario so that load_config reads back an equal one.

    Floats are written with repr, which round-trips exactly.
    """
    lines = ["[network]"]
    if isinstance(scenario.network, StiffnessChain):
        lines.append(f"robots = {scenario.network.n}")
        lines.append("neighbor_stiffness = "
                     + ", ".join(repr(k) for k in scenario.network.neighbor_stiffness))
    else:
        lines.append(f"robots = {scenario.network.n}")
        pairs = ", ".join(f"{i + 1}-{j + 1}: {k!r}"
                          for (i, j), k in sorted(scenario.network.couplings.items()))
        lines.append(f"couplings = {pairs}")
    lines.append("leader_stiffness = "
                 + ", ".join(repr(k) for k in scenario.network.leader_stiffness))

    ctl = scenario.controller
    lines += ["", "[controller]", f"kind = {ctl.kind}"]
    if ctl.kind == "baseline":
        lines.append(f"gamma = {ctl.gamma!r}")
    else:
        lines.append(f"alpha = {ctl.alpha!r}")
        lines.append(f"beta = {ctl.beta!r}")
        lines.append(f"delay_multiple = {ctl.delay_multiple}")
    lines.append(f"dt = {ctl.dt!r}")

    trj = scenario.trajectory
    lines += ["", "[trajectory]", f"kind = {trj.kind}",
              f"amplitude = {trj.amplitude!r}"]
    if trj.cutoff is not None:
        lines.append(f"cutoff = {trj.cutoff!r}")
    lines.append(f"start_index = {trj.start_index}")

    lines += ["", "[run]", f"duration = {scenario.duration!r}"]
    if scenario.label:
        lines.append(f"label = {scenario.label}")
    if scenario.out_dir:
        lines.append(f"out_dir = {scenario.out_dir}")
    Path(path).write_text("\n".join(lines) + "\n")
