"""Common rates for the four-node Gaussian broadcast relay channel.

Node 1 is the source, node 2 the relay, nodes 3 and 4 the destinations.
The destinations and the relay form a unit equilateral triangle and the
source sits d_12 behind the relay on its bisector, so that
d_13^2 = d_14^2 = 1/4 + (sqrt(3)/2 + d_12)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelValidationError
from .optimizer import OptimizerConfig, _refine

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class BrcConfig:
    """Powers, source-relay distance, and the cooperation split alpha."""

    p1: float = 10.0
    p2: float = 10.0
    n2: float = 1.0
    n3: float = 1.0
    n4: float = 1.0
    d12: float = 1.0
    alpha: float = 0.0
    kappa: float = 1.0
    eta: float = 2.0

    def __post_init__(self):
        if min(self.p1, self.p2) < 0.0:
            raise ChannelValidationError("transmit powers must be non-negative")
        if min(self.n2, self.n3, self.n4) <= 0.0:
            raise ChannelValidationError("noise powers must be positive")
        if self.d12 <= 0.0:
            raise ChannelValidationError("d12 must be positive")
        if not 0.0 <= self.alpha <= 1.0:
            raise ChannelValidationError("alpha must lie in [0, 1]")
        if self.kappa <= 0.0 or self.eta <= 1.0:
            raise ChannelValidationError("kappa must be positive and eta > 1")

    # relay and destinations at unit equilateral spacing
    d23 = 1.0
    d24 = 1.0
    d34 = 1.0

    @property
    def d13(self) -> float:
        return math.sqrt(0.25 + (math.sqrt(3.0) / 2.0 + self.d12) ** 2)

    d14 = d13

    def gain(self, d: float) -> float:
        return self.kappa * d ** (-self.eta)


@dataclass(frozen=True)
class BrcRates:
    """Per-receiver reception rates and the common-rate bound."""

    r2: float
    r3: float
    r4: float
    common_rate: float


def brc_onehop_common_rate(cfg: BrcConfig) -> BrcRates:
    """One-hop myopic decode-forward: a point-to-point hop into the relay
    cascaded with a broadcast hop; the source interferes at the
    destinations."""
    r2 = 0.5 * math.log2(1.0 + cfg.gain(cfg.d12) * cfg.p1 / cfg.n2)
    r3 = 0.5 * math.log2(
        1.0 + cfg.gain(cfg.d23) * cfg.p2 / (cfg.n3 + cfg.gain(cfg.d13) * cfg.p1)
    )
    r4 = 0.5 * math.log2(
        1.0 + cfg.gain(cfg.d24) * cfg.p2 / (cfg.n4 + cfg.gain(cfg.d14) * cfg.p1)
    )
    return BrcRates(r2, r3, r4, min(r2, r3, r4))


def brc_omniscient_common_rate(cfg: BrcConfig) -> BrcRates:
    """Omniscient decode-forward: the source spends alpha of its power
    coherently reinforcing the relay's transmission."""
    r2 = 0.5 * math.log2(
        1.0 + cfg.gain(cfg.d12) * (1.0 - cfg.alpha) * cfg.p1 / cfg.n2
    )

    def dest_rate(d1x, d2x, noise):
        received = (
            cfg.gain(d1x) * (1.0 - cfg.alpha) * cfg.p1
            + (
                math.sqrt(cfg.gain(d1x) * cfg.alpha * cfg.p1)
                + math.sqrt(cfg.gain(d2x) * cfg.p2)
            ) ** 2
        )
        return 0.5 * math.log2(1.0 + received / noise)

    r3 = dest_rate(cfg.d13, cfg.d23, cfg.n3)
    r4 = dest_rate(cfg.d14, cfg.d24, cfg.n4)
    return BrcRates(r2, r3, r4, min(r2, r3, r4))


@dataclass(frozen=True)
class BrcOptimum:
    """Best common rate over alpha, with the maximizing configuration."""

    common_rate: float
    rates: BrcRates
    config: BrcConfig
    evaluations: int
    incomplete: bool


def brc_optimize(cfg: BrcConfig, opt: OptimizerConfig = OptimizerConfig()) -> BrcOptimum:
    """Grid-refinement over the single split alpha in [0, 1]."""

    def evaluate(free):
        out = np.empty(free.shape[0])
        for i, a in enumerate(free[:, 0]):
            out[i] = brc_omniscient_common_rate(replace(cfg, alpha=a)).common_rate
        return out

    best_free, _, evals, _, incomplete = _refine(evaluate, 1, opt)
    best_cfg = replace(cfg, alpha=float(best_free[0]))
    rates = brc_omniscient_common_rate(best_cfg)
    return BrcOptimum(rates.common_rate, rates, best_cfg, evals, incomplete)
