"""Geometry, propagation, and power bookkeeping for relay networks.

Node ids are 1-based: node 1 is the source, node T the destination, and
nodes 2..T-1 relays.  Distances are in meters, powers in watts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MIN_DISTANCE_M = 1e-9


class ChannelValidationError(ValueError):
    """Raised when a geometry, propagation, or power description is invalid."""


@dataclass(frozen=True)
class NetworkGeometry:
    """Pairwise distances between the T nodes of a relay network."""

    distances: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float)
        object.__setattr__(self, "distances", d)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ChannelValidationError("distance matrix must be square")
        if d.shape[0] < 3:
            raise ChannelValidationError(
                "need at least 3 nodes (source, one relay, destination)"
            )
        if not np.allclose(d, d.T, rtol=1e-12, atol=0.0):
            raise ChannelValidationError("distance matrix must be symmetric")
        if np.any(np.diag(d) != 0.0):
            raise ChannelValidationError("self-distances must be zero")
        off = d[~np.eye(d.shape[0], dtype=bool)]
        if np.any(off < MIN_DISTANCE_M):
            raise ChannelValidationError(
                f"off-diagonal distances must be >= {MIN_DISTANCE_M} m"
            )
        d.setflags(write=False)

    @property
    def node_count(self) -> int:
        return self.distances.shape[0]

    def distance(self, i: int, t: int) -> float:
        """Distance in meters between nodes i and t (1-based ids)."""
        return float(self.distances[i - 1, t - 1])


def build_linear_geometry(spacings) -> NetworkGeometry:
    """Geometry of nodes on a straight line with the given adjacent spacings.

    ``spacings[j]`` is the distance from node j+1 to node j+2, so T =
    len(spacings) + 1.  The result satisfies d_ik = d_ij + d_jk for i < j < k.
    """
    s = np.asarray(spacings, dtype=float)
    if s.ndim != 1 or s.size < 2:
        raise ChannelValidationError("need at least 2 spacings (3 nodes)")
    if np.any(s <= 0.0):
        raise ChannelValidationError("spacings must be positive")
    pos = np.concatenate([[0.0], np.cumsum(s)])
    return NetworkGeometry(np.abs(pos[:, None] - pos[None, :]))


@dataclass(frozen=True)
class PropagationModel:
    """Path-loss model: gain(i, t) = kappa * d_it ** (-eta).

    eta >= 2 is enforced (free space at equality); pass
    ``allow_low_eta=True`` to explore 1 < eta < 2.
    """

    kappa: float = 1.0
    eta: float = 2.0
    allow_low_eta: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.kappa <= 0.0:
            raise ChannelValidationError("kappa must be positive")
        if self.eta < 2.0 and not self.allow_low_eta:
            raise ChannelValidationError(
                "eta >= 2 required (use allow_low_eta=True to override)"
            )
        if self.eta <= 1.0:
            raise ChannelValidationError("eta must exceed 1")


@dataclass(frozen=True)
class PowerConfig:
    """Average transmit powers for nodes 1..T-1 and noise powers for 2..T."""

    transmit_powers: np.ndarray
    noise_powers: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.transmit_powers, dtype=float)
        n = np.asarray(self.noise_powers, dtype=float)
        object.__setattr__(self, "transmit_powers", p)
        object.__setattr__(self, "noise_powers", n)
        if p.ndim != 1 or n.ndim != 1 or p.size != n.size:
            raise ChannelValidationError(
                "need T-1 transmit powers and T-1 noise powers"
            )
        if np.any(p < 0.0):
            raise ChannelValidationError("transmit powers must be non-negative")
        if np.any(n <= 0.0):
            raise ChannelValidationError("noise powers must be strictly positive")
        p.setflags(write=False)
        n.setflags(write=False)

    @classmethod
    def uniform(cls, node_count: int, power: float, noise: float = 1.0) -> "PowerConfig":
        return cls(
            np.full(node_count - 1, float(power)),
            np.full(node_count - 1, float(noise)),
        )

    def transmit_power(self, i: int) -> float:
        """Average transmit power of node i (1-based, i <= T-1)."""
        return float(self.transmit_powers[i - 1])

    def noise_power(self, t: int) -> float:
        """Receiver noise power at node t (1-based, 2 <= t <= T)."""
        return float(self.noise_powers[t - 2])


def gain(geometry: NetworkGeometry, prop: PropagationModel, i: int, t: int) -> float:
    """Dimensionless channel gain kappa * d_it ** (-eta) between nodes i and t."""
    if i == t:
        raise ChannelValidationError("no self-gain: i and t must differ")
    return prop.kappa * geometry.distance(i, t) ** (-prop.eta)


def received_power(
    geometry: NetworkGeometry,
    prop: PropagationModel,
    power: PowerConfig,
    i: int,
    t: int,
) -> float:
    """Received power at node t from transmitter i, gain(i, t) * P_i, in watts."""
    if i >= geometry.node_count:
        raise ChannelValidationError("the destination does not transmit")
    return gain(geometry, prop, i, t) * power.transmit_power(i)
