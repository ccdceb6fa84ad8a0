"""Spring-network model of a flexible object carried by robots.

The object is idealized as linear springs between neighboring robots.
Robot k measures the force the object exerts on it, which for small
local deformations is

    f_k = sum_j khat_kj * (y_k - y_j)        [N, positions in cm]

with khat_kj the effective stiffness (N/cm) between robots k and j.
Leaders additionally feel a virtual spring of stiffness khat_kd pulling
them toward the reference position. Collecting the stiffnesses gives
the pinned Laplacian K (symmetric positive definite as long as at least
one robot is pinned to the virtual source) and the leader vector B with
B_k = khat_kd, the workhorses of every update law in this package.

Units throughout: cm, N, s, N/cm. Robot indices are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .eigensolve import DEFAULT_SIZE_CAP, eigen_decompose
from .errors import CalibrationError, UnpinnedNetworkError

_EIGEN_RECONSTRUCT_RTOL = 1e-10


@dataclass(frozen=True)
class StiffnessChain:
    """Open chain of robots: robot i couples to robot i+1.

    ``neighbor_stiffness[i]`` is the spring between robots i and i+1
    (length n-1), ``leader_stiffness[k]`` the virtual-source spring of
    robot k (zero for non-leaders, length n).
    """

    neighbor_stiffness: tuple[float, ...]
    leader_stiffness: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "neighbor_stiffness",
                           tuple(float(k) for k in self.neighbor_stiffness))
        object.__setattr__(self, "leader_stiffness",
                           tuple(float(k) for k in self.leader_stiffness))
        if len(self.leader_stiffness) != len(self.neighbor_stiffness) + 1:
            raise ValueError(
                "leader_stiffness must have one entry per robot "
                f"(got {len(self.leader_stiffness)} for "
                f"{len(self.neighbor_stiffness) + 1} robots)")
        if any(k <= 0 or not np.isfinite(k) for k in self.neighbor_stiffness):
            raise ValueError("neighbor stiffnesses must be positive and finite")
        if any(k < 0 or not np.isfinite(k) for k in self.leader_stiffness):
            raise ValueError("leader stiffnesses must be non-negative and finite")

    @property
    def n(self) -> int:
        return len(self.leader_stiffness)

    def coupling_map(self) -> dict[tuple[int, int], float]:
        """Chain topology as an explicit {(i, j): stiffness} map, i < j."""
        return {(i, i + 1): k for i, k in enumerate(self.neighbor_stiffness)}

    def with_leader_stiffness(self, leader_stiffness: Sequence[float]) -> "StiffnessChain":
        return replace(self, leader_stiffness=tuple(leader_stiffness))


@dataclass(frozen=True)
class CouplingNetwork:
    """General undirected stiffness topology for non-chain objects.

    ``couplings`` maps unordered robot pairs (stored with i < j) to a
    positive stiffness. Same invariants as the chain otherwise.
    """

    n: int
    couplings: Mapping[tuple[int, int], float]
    leader_stiffness: tuple[float, ...]

    def __post_init__(self):
        normalized: dict[tuple[int, int], float] = {}
        for (i, j), k in self.couplings.items():
            if i == j or not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"invalid coupling pair ({i}, {j}) for n={self.n}")
            key = (min(i, j), max(i, j))
            if key in normalized:
                raise ValueError(f"duplicate coupling pair {key}")
            if k <= 0 or not np.isfinite(k):
                raise ValueError(f"coupling stiffness for {key} must be positive")
            normalized[key] = float(k)
        object.__setattr__(self, "couplings", normalized)
        object.__setattr__(self, "leader_stiffness",
                           tuple(float(k) for k in self.leader_stiffness))
        if len(self.leader_stiffness) != self.n:
            raise ValueError("leader_stiffness must have one entry per robot")
        if any(k < 0 or not np.isfinite(k) for k in self.leader_stiffness):
            raise ValueError("leader stiffnesses must be non-negative and finite")

    def coupling_map(self) -> dict[tuple[int, int], float]:
        return dict(self.couplings)


@dataclass(frozen=True)
class CalibrationRecord:
    """One stiffness-estimation move: robot ``moved_robot`` displaced by
    ``displacement`` cm with every other robot held fixed and no virtual
    source attached; ``measured_force`` is the force it then reads."""

    moved_robot: int
    displacement: float
    measured_force: float

    def __post_init__(self):
        if self.displacement == 0:
            raise ValueError("calibration displacement must be nonzero")


@dataclass(frozen=True)
class PinnedLaplacian:
    """Pinned Laplacian K with leader vector B and eigendecomposition.

    ``matrix[k][k] = leader_stiffness[k] + sum_j khat_kj`` and
    off-diagonals are ``-khat_kj``, so rows sum to the pinning stiffness
    and ``K @ ones == B``. Eigenvalues are ascending, eigenvectors the
    columns of an orthogonal matrix. All arrays are read-only; instances
    are safe to share across threads.
    """

    matrix: np.ndarray
    leader_vector: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        for field in ("matrix", "leader_vector", "eigenvalues", "eigenvectors"):
            arr = getattr(self, field)
            arr.flags.writeable = False

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])


def _assemble(n: int, couplings: Mapping[tuple[int, int], float],
              leader_stiffness: Sequence[float]) -> PinnedLaplacian:
    leaders = np.asarray(leader_stiffness, dtype=float)
    if not np.any(leaders > 0):
        raise UnpinnedNetworkError(
            "unpinned network: every leader stiffness is zero, "
            "the pinned Laplacian would be singular")
    k = np.zeros((n, n))
    for (i, j), stiff in couplings.items():
        k[i, j] -= stiff
        k[j, i] -= stiff
        k[i, i] += stiff
        k[j, j] += stiff
    k[np.diag_indices(n)] += leaders

    eigenvalues, eigenvectors = eigen_decompose(k, size_cap=DEFAULT_SIZE_CAP)
    if eigenvalues[0] <= 1e-12 * abs(eigenvalues[-1]):
        # cannot happen for a connected pinned network; guards disconnected maps
        raise UnpinnedNetworkError(
            "network has a non-positive Laplacian eigenvalue; "
            "some component is not pinned to the virtual source")
    recon = eigenvectors @ np.diag(eigenvalues) @ eigenvectors.T
    err = np.max(np.abs(recon - k))
    if err > _EIGEN_RECONSTRUCT_RTOL * max(np.max(np.abs(k)), 1e-300):
        raise RuntimeError("eigendecomposition failed its reconstruction bound")
    return PinnedLaplacian(matrix=k, leader_vector=leaders.copy(),
                           eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def build_pinned_laplacian(network: StiffnessChain | CouplingNetwork) -> PinnedLaplacian:
    """Assemble K and B from a chain or a general stiffness map."""
    return _assemble(network.n, network.coupling_map(), network.leader_stiffness)


def build_pinned_laplacian_from_map(n: int,
                                    couplings: Mapping[tuple[int, int], float],
                                    leader_stiffness: Sequence[float]) -> PinnedLaplacian:
    """Assemble K and B directly from an explicit {(i, j): stiffness} map."""
    return build_pinned_laplacian(CouplingNetwork(n=n, couplings=dict(couplings),
                                                  leader_stiffness=tuple(leader_stiffness)))


def measured_force(network: StiffnessChain | CouplingNetwork,
                   positions: Sequence[float], robot: int) -> float:
    """Local object force on one robot: sum of its neighbor spring forces.

    This is the quantity a force sensor between robot and object reads.
    The virtual-source force on leaders is not included here; update
    laws add it separately.
    """
    y = np.asarray(positions, dtype=float)
    total = 0.0
    for (i, j), stiff in network.coupling_map().items():
        if i == robot:
            total += stiff * (y[i] - y[j])
        elif j == robot:
            total += stiff * (y[j] - y[i])
    return total


def neighbor_forces(laplacian: PinnedLaplacian, positions: np.ndarray) -> np.ndarray:
    """All robots' local forces at once, via f = K @ Y - B * Y.

    Works on a single position vector or row-wise on a (steps, n) array.
    Equivalent to stacking ``measured_force`` over robots; the identity
    holds because the leader stiffness appears in K's diagonal only.
    """
    y = np.asarray(positions, dtype=float)
    return y @ laplacian.matrix.T - laplacian.leader_vector * y


def calibrate_stiffness(records: Sequence[CalibrationRecord],
                        leader_stiffness: Sequence[float] | None = None) -> StiffnessChain:
    """Recover chain stiffnesses from move-one-robot force measurements.

    Records must be in chain order starting at robot 0. Moving robot i
    with all others fixed loads both of its springs, so the first move
    gives khat_01 = f/y directly and each later move gives the forward
    stiffness after subtracting the already-known backward one.

    The procedure knows nothing about virtual sources; pass
    ``leader_stiffness`` to attach them, otherwise they default to zero
    and must be set before building a pinned Laplacian.
    """
    if not records:
        raise CalibrationError("no calibration records given")
    stiffnesses: list[float] = []
    for idx, rec in enumerate(records):
        if rec.moved_robot != idx:
            raise CalibrationError(
                f"records must be in chain order: expected robot {idx}, "
                f"got {rec.moved_robot}")
        ratio = rec.measured_force / rec.displacement
        value = ratio if idx == 0 else ratio - stiffnesses[idx - 1]
        if value <= 0:
            raise CalibrationError(
                f"inconsistent calibration data: record {idx} implies "
                f"stiffness {value:.6g} N/cm")
        stiffnesses.append(value)
    n = len(stiffnesses) + 1
    leaders = tuple(leader_stiffness) if leader_stiffness is not None else (0.0,) * n
    return StiffnessChain(neighbor_stiffness=tuple(stiffnesses),
                          leader_stiffness=leaders)
