"""Large-network behavior of two-hop decode-forward on equally spaced chains.

With unit spacing the interference a receiver cannot cancel is a sum of
inverse-power-law terms whose total is bounded by 6 * zeta(eta) * kappa * P
at every interior node, so reception rates stay bounded away from zero as
the chain grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_T_CAP = 5000
_CHUNK = 1 << 20


class ZetaDivergenceError(ValueError):
    """zeta(eta) diverges for eta <= 1."""


@dataclass(frozen=True)
class ZetaValue:
    """Partial zeta sum with a certified truncation error.

    The tail past J is bracketed by the integral bounds
    (J+1)^(1-eta)/(eta-1) <= sum_{j>J} j^-eta <= J^(1-eta)/(eta-1);
    ``value`` is the partial sum plus the bracket midpoint and ``error``
    half the bracket width.
    """

    eta: float
    value: float
    error: float
    terms: int


def zeta(eta: float, accuracy: float = 1e-9) -> ZetaValue:
    """Riemann zeta at eta > 1 to a certified absolute accuracy."""
    if eta <= 1.0:
        raise ZetaDivergenceError(f"zeta diverges for eta <= 1 (got {eta})")
    if accuracy <= 0.0:
        raise ValueError("accuracy must be positive")

    terms = max(16, int(math.ceil((0.5 / accuracy) ** (1.0 / eta))))
    while True:
        upper = terms ** (1.0 - eta) / (eta - 1.0)
        lower = (terms + 1.0) ** (1.0 - eta) / (eta - 1.0)
        error = 0.5 * (upper - lower)
        if error <= accuracy:
            break
        terms *= 2
    partial = 0.0
    for start in range(1, terms + 1, _CHUNK):
        j = np.arange(start, min(start + _CHUNK, terms + 1), dtype=float)
        partial += float(np.sum(j ** (-eta)))
    return ZetaValue(eta, partial + 0.5 * (upper + lower), error, terms)


def interference_bound(eta: float, kappa: float, power: float,
                       accuracy: float = 1e-9) -> float:
    """Interior-node interference cap 6 * zeta(eta) * kappa * P in watts."""
    return 6.0 * zeta(eta, accuracy).value * kappa * power


@dataclass(frozen=True)
class LargeNetworkReport:
    """Per-node rates and interference for a unit-spacing two-hop chain."""

    node_count: int
    rates: np.ndarray        # reception rate of nodes 2..T
    p_sig: np.ndarray
    p_int: np.ndarray
    min_rate: float
    bottleneck: int
    interior_nodes: tuple    # node range the 6*zeta bound certifies
    max_interior_interference: float
    bound: float
    bound_satisfied: bool


def large_T_report(
    node_count: int,
    power: float = 10.0,
    eta: float = 2.0,
    kappa: float = 1.0,
    noise: float = 1.0,
    alpha=0.5,
    t_cap: int = DEFAULT_T_CAP,
) -> LargeNetworkReport:
    """Evaluate every reception rate of the T-node unit-spacing chain under
    two-hop decode-forward with the given forward fraction(s).

    ``alpha`` is a scalar or per-node array of the fractions nodes 1..T-2
    spend on the next node's sub-signal.  Interior nodes are checked
    against the 6*zeta(eta) interference bound; boundary nodes are only
    evaluated directly.
    """
    t = int(node_count)
    if t < 3:
        raise ValueError("need at least 3 nodes")
    if t > t_cap:
        raise ValueError(f"node count {t} exceeds the resource cap {t_cap}")
    if eta <= 1.0:
        raise ZetaDivergenceError("eta must exceed 1 for bounded interference")

    fwd = np.broadcast_to(np.asarray(alpha, dtype=float), (t - 2,)).copy()
    if np.any((fwd < 0.0) | (fwd > 1.0)):
        raise ValueError("forward fractions must lie in [0, 1]")
    # node T-1 carries only its own sub-signal
    a = np.concatenate([fwd, [0.0]])

    q = np.arange(1, t)                    # sub-signal of node q
    p_sig = np.zeros(t - 1)
    p_int = np.zeros(t - 1)
    rates = np.zeros(t - 1)
    for rcv in range(2, t + 1):
        with np.errstate(divide="ignore"):
            g_own = np.abs(q - rcv).astype(float) ** (-eta)
            g_fwd = np.abs(q[1:] - 1 - rcv).astype(float) ** (-eta)
        g_own[q == rcv] = 0.0
        g_fwd[q[1:] - 1 == rcv] = 0.0
        c_own = kappa * g_own * (1.0 - a) * power
        c_fwd = np.zeros(t - 1)
        c_fwd[1:] = kappa * g_fwd * a[:-1] * power
        term = (np.sqrt(c_fwd) + np.sqrt(c_own)) ** 2

        decode = (q >= rcv - 2) & (q <= rcv - 1)
        known = (q >= rcv) & (q <= rcv + 1)
        sig = float(term[decode].sum())
        inter = float(term[~decode & ~known].sum())
        p_sig[rcv - 2] = sig
        p_int[rcv - 2] = inter
        rates[rcv - 2] = 0.5 * math.log2(1.0 + sig / (noise + inter))

    bottleneck = int(np.argmin(rates)) + 2
    interior = tuple(range(4, t - 2))
    bound = interference_bound(eta, kappa, power)
    if interior:
        interior_idx = np.array(interior) - 2
        max_int = float(p_int[interior_idx].max())
        ok = bool(max_int < bound)
    else:
        max_int = 0.0
        ok = True
    return LargeNetworkReport(
        node_count=t,
        rates=rates,
        p_sig=p_sig,
        p_int=p_int,
        min_rate=float(rates.min()),
        bottleneck=bottleneck,
        interior_nodes=interior,
        max_interior_interference=max_int,
        bound=bound,
        bound_satisfied=ok,
    )
