"""Sum rates for the four-node Gaussian multiple-access relay channel.

Nodes 1 and 2 are sources at unit distance from each other and from the
relay (node 3); the destination (node 4) sits on the perpendicular
bisector of the sources, d_34 behind the relay, so that
d_14^2 = d_24^2 = (sqrt(3)/2 + d_34)^2 + 1/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelValidationError
from .optimizer import OptimizerConfig, OptimumResult, _refine

SPLIT_TOL = 1e-12


@dataclass(frozen=True)
class MarcConfig:
    """Powers, relay-destination distance, and cooperation splits.

    alpha_i is the fraction of source i's power spent repeating what the
    relay sends; beta_1 + beta_2 = 1 divides the relay's power between the
    two source messages.
    """

    p1: float = 10.0
    p2: float = 10.0
    p3: float = 10.0
    n3: float = 1.0
    n4: float = 1.0
    d34: float = 1.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    beta1: float = 0.5
    beta2: float = 0.5
    kappa: float = 1.0
    eta: float = 2.0

    def __post_init__(self):
        if min(self.p1, self.p2, self.p3) < 0.0:
            raise ChannelValidationError("transmit powers must be non-negative")
        if min(self.n3, self.n4) <= 0.0:
            raise ChannelValidationError("noise powers must be positive")
        if self.d34 <= 0.0:
            raise ChannelValidationError("d34 must be positive")
        if not (0.0 <= self.alpha1 <= 1.0 and 0.0 <= self.alpha2 <= 1.0):
            raise ChannelValidationError("alpha splits must lie in [0, 1]")
        if min(self.beta1, self.beta2) < 0.0 or abs(self.beta1 + self.beta2 - 1.0) > SPLIT_TOL:
            raise ChannelValidationError("beta splits must be non-negative and sum to 1")
        if self.kappa <= 0.0 or self.eta <= 1.0:
            raise ChannelValidationError("kappa must be positive and eta > 1")

    # source-relay distances are fixed at 1 m (unit equilateral sources)
    d13 = 1.0
    d23 = 1.0

    @property
    def d14(self) -> float:
        return math.sqrt((math.sqrt(3.0) / 2.0 + self.d34) ** 2 + 0.25)

    d24 = d14

    def gain(self, d: float) -> float:
        return self.kappa * d ** (-self.eta)


@dataclass(frozen=True)
class MarcRates:
    """Reception sum rates at the relay and the destination."""

    r3: float
    r4: float
    sum_rate: float


def marc_onehop_sumrate(cfg: MarcConfig) -> MarcRates:
    """One-hop myopic decode-forward: the destination decodes the relay
    only and treats the sources as noise."""
    r3 = 0.5 * math.log2(
        1.0 + (cfg.gain(cfg.d13) * cfg.p1 + cfg.gain(cfg.d23) * cfg.p2) / cfg.n3
    )
    interference = cfg.gain(cfg.d14) * cfg.p1 + cfg.gain(cfg.d24) * cfg.p2
    r4 = 0.5 * math.log2(
        1.0 + cfg.gain(cfg.d34) * cfg.p3 / (cfg.n4 + interference)
    )
    return MarcRates(r3, r4, min(r3, r4))


def marc_omniscient_sumrate(cfg: MarcConfig) -> MarcRates:
    """Omniscient decode-forward with coherent source-relay cooperation."""
    r3 = 0.5 * math.log2(
        1.0
        + (
            cfg.gain(cfg.d13) * (1.0 - cfg.alpha1) * cfg.p1
            + cfg.gain(cfg.d23) * (1.0 - cfg.alpha2) * cfg.p2
        )
        / cfg.n3
    )
    received = (
        cfg.gain(cfg.d14) * cfg.p1
        + cfg.gain(cfg.d24) * cfg.p2
        + cfg.gain(cfg.d34) * cfg.p3
        + 2.0 * math.sqrt(
            cfg.alpha1 * cfg.beta1 * cfg.p1 * cfg.p3
            * cfg.gain(cfg.d14) * cfg.gain(cfg.d34)
        )
        + 2.0 * math.sqrt(
            cfg.alpha2 * cfg.beta2 * cfg.p2 * cfg.p3
            * cfg.gain(cfg.d24) * cfg.gain(cfg.d34)
        )
    )
    r4 = 0.5 * math.log2(1.0 + received / cfg.n4)
    return MarcRates(r3, r4, min(r3, r4))


@dataclass(frozen=True)
class MarcOptimum:
    """Best sum rate found, with the maximizing configuration."""

    sum_rate: float
    rates: MarcRates
    config: MarcConfig
    evaluations: int
    incomplete: bool


def marc_optimize(
    cfg: MarcConfig,
    which: str = "omniscient",
    opt: OptimizerConfig = OptimizerConfig(),
    sweep_source_power: tuple = None,
    asymmetric: bool = False,
) -> MarcOptimum:
    """Maximize the sum rate.

    ``which='omniscient'`` searches the symmetric split alpha_1 = alpha_2
    with beta fixed at 1/2 (4-D asymmetric search behind ``asymmetric``).
    ``which='onehop'`` has no splits; pass ``sweep_source_power=(lo, hi)``
    to search the common source power P_1 = P_2 instead.
    """
    if which not in ("onehop", "omniscient"):
        raise ValueError("which must be 'onehop' or 'omniscient'")

    if which == "onehop":
        if sweep_source_power is None:
            rates = marc_onehop_sumrate(cfg)
            return MarcOptimum(rates.sum_rate, rates, cfg, 1, False)
        lo, hi = map(float, sweep_source_power)

        def evaluate(free):
            out = np.empty(free.shape[0])
            for i, v in enumerate(free[:, 0]):
                p = lo + v * (hi - lo)
                out[i] = marc_onehop_sumrate(replace(cfg, p1=p, p2=p)).sum_rate
            return out

        best_free, _, evals, _, incomplete = _refine(evaluate, 1, opt)
        p = lo + best_free[0] * (hi - lo)
        best_cfg = replace(cfg, p1=p, p2=p)
        rates = marc_onehop_sumrate(best_cfg)
        return MarcOptimum(rates.sum_rate, rates, best_cfg, evals, incomplete)

    if asymmetric:
        def evaluate(free):
            out = np.empty(free.shape[0])
            for i, (a1, a2, b1) in enumerate(free):
                out[i] = marc_omniscient_sumrate(
                    replace(cfg, alpha1=a1, alpha2=a2, beta1=b1, beta2=1.0 - b1)
                ).sum_rate
            return out

        best_free, _, evals, _, incomplete = _refine(evaluate, 3, opt)
        best_cfg = replace(
            cfg,
            alpha1=float(best_free[0]),
            alpha2=float(best_free[1]),
            beta1=float(best_free[2]),
            beta2=1.0 - float(best_free[2]),
        )
    else:
        def evaluate(free):
            out = np.empty(free.shape[0])
            for i, a in enumerate(free[:, 0]):
                out[i] = marc_omniscient_sumrate(
                    replace(cfg, alpha1=a, alpha2=a, beta1=0.5, beta2=0.5)
                ).sum_rate
            return out

        best_free, _, evals, _, incomplete = _refine(evaluate, 1, opt)
        a = float(best_free[0])
        best_cfg = replace(cfg, alpha1=a, alpha2=a, beta1=0.5, beta2=0.5)

    rates = marc_omniscient_sumrate(best_cfg)
    return MarcOptimum(rates.sum_rate, rates, best_cfg, evals, incomplete)
