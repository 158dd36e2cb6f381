"""Deterministic nested grid-refinement for the max-min rate problems.

The objective min_t R_t has kinks where the bottleneck receiver switches,
so derivative-free search over the split/spacing simplices is used
throughout.  Simplex rows with m entries are parameterized by m-1 free
coordinates in [0, 1] via the stick-breaking map, which keeps every grid
point feasible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channel import NetworkGeometry, PowerConfig, PropagationModel, build_linear_geometry
from .coding import CombiningMode, Permutation, SplitMatrix, row_lengths
from .gaussian import RateReport, rate_report
from .kernel import batch_min_rate, compile_chain

PERMUTATION_NODE_CAP = 9
SPACING_EDGE_MARGIN = 1e-3


@dataclass(frozen=True)
class OptimizerConfig:
    """Grid resolution, refinement schedule, and evaluation budget."""

    resolution: int = 21
    rounds: int = 3
    shrink: float = 5.0
    tolerance: float = 1e-6
    budget: int = 400_000

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")
        if self.rounds < 0:
            raise ValueError("rounds must be non-negative")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.shrink <= 1.0:
            raise ValueError("shrink factor must exceed 1")


@dataclass(frozen=True)
class OptimumResult:
    """Best operating point found, re-evaluated through the reference path."""

    rate: float
    report: RateReport
    splits: SplitMatrix
    evaluations: int
    achieved_tolerance: float
    incomplete: bool
    geometry: Optional[NetworkGeometry] = None
    permutation: Optional[Permutation] = None


def free_to_fractions(free: np.ndarray, lengths) -> np.ndarray:
    """Stick-breaking map from free coordinates to concatenated simplex rows.

    ``free`` has one column per free coordinate (sum of m-1 over rows);
    the result has one column per fraction (sum of m over rows).
    """
    n = free.shape[0]
    out = np.empty((n, sum(lengths)))
    at_f, at_c = 0, 0
    for m in lengths:
        rem = np.ones(n)
        for j in range(m - 1):
            v = free[:, at_f + j]
            out[:, at_c + j] = rem * v
            rem = rem * (1.0 - v)
        out[:, at_c + m - 1] = rem
        at_f += m - 1
        at_c += m
    return out


def fractions_to_free(fracs, lengths) -> np.ndarray:
    """Inverse stick-breaking map for a single concatenated fraction vector."""
    fracs = np.asarray(fracs, dtype=float)
    free = []
    at = 0
    for m in lengths:
        rem = 1.0
        for j in range(m - 1):
            v = fracs[at + j] / rem if rem > 1e-300 else 0.0
            free.append(min(max(v, 0.0), 1.0))
            rem -= fracs[at + j]
        at += m
    return np.array(free)


def _grid_axes(box_lo, box_hi, per_round_budget, resolution):
    ndim = box_lo.size
    res = resolution
    while res > 2 and res ** ndim > per_round_budget:
        res -= 1
    axes = [np.linspace(box_lo[d], box_hi[d], res) for d in range(ndim)]
    return axes, res ** ndim


def _grid_candidates(axes):
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _shrink_box(center, lo, hi, shrink, outer_lo, outer_hi):
    width = (hi - lo) / shrink
    new_lo = np.maximum(center - width / 2.0, outer_lo)
    new_hi = np.minimum(new_lo + width, outer_hi)
    new_lo = np.maximum(new_hi - width, outer_lo)
    return new_lo, new_hi


def _refine(evaluate, ndim, config, extra_points=(), box=(0.0, 1.0)):
    """Shared refinement loop.

    ``evaluate`` maps an (n, ndim) array of free coordinates to (n,) rates.
    Returns (best_free, best_rate, evaluations, achieved_tol, incomplete).
    """
    outer_lo = np.full(ndim, box[0])
    outer_hi = np.full(ndim, box[1])
    lo, hi = outer_lo.copy(), outer_hi.copy()
    evaluations = 0
    best_rate = -math.inf
    best_free = (lo + hi) / 2.0
    achieved = math.inf
    incomplete = False

    extras = [np.asarray(p, dtype=float) for p in extra_points]
    if extras:
        pts = np.stack(extras)
        rates = evaluate(pts)
        evaluations += pts.shape[0]
        idx = int(np.argmax(rates))
        if rates[idx] > best_rate:
            best_rate = float(rates[idx])
            best_free = pts[idx].copy()

    n_rounds = config.rounds + 1  # coarse pass plus refinement rounds
    stalled = 0
    for rnd in range(n_rounds):
        remaining = config.budget - evaluations
        if remaining < 2 ** ndim:
            incomplete = True
            break
        per_round = max(2 ** ndim, remaining // (n_rounds - rnd))
        axes, _ = _grid_axes(lo, hi, per_round, config.resolution)
        cands = _grid_candidates(axes)
        rates = evaluate(cands)
        evaluations += cands.shape[0]
        idx = int(np.argmax(rates))
        improvement = float(rates[idx]) - best_rate
        if improvement > 0.0:
            best_rate = float(rates[idx])
            best_free = cands[idx].copy()
        achieved = max(improvement, 0.0)
        # a single flat round can just mean the shrunk grid re-hit the
        # incumbent point, so require two stalled rounds before stopping
        stalled = stalled + 1 if achieved < config.tolerance else 0
        if rnd > 0 and stalled >= 2:
            break
        lo, hi = _shrink_box(best_free, lo, hi, config.shrink, outer_lo, outer_hi)

    if not math.isfinite(achieved):
        achieved = 0.0
    return best_free, best_rate, evaluations, achieved, incomplete


def optimize_splits(
    geometry: NetworkGeometry,
    prop: PropagationModel,
    power: PowerConfig,
    k: int,
    perm: Permutation = None,
    mode: CombiningMode = CombiningMode.COHERENT,
    config: OptimizerConfig = OptimizerConfig(),
    extra_splits=(),
) -> OptimumResult:
    """Max-min rate over all feasible split matrices for a fixed channel.

    ``extra_splits`` are always-evaluated candidates (e.g. the optimum of a
    smaller k embedded with zero forward mass), which keeps optimized rates
    monotone in k by feasible-set nesting.
    """
    t_count = geometry.node_count
    perm = perm or Permutation.identity(t_count)
    lengths = tuple(row_lengths(t_count, k, perm)[t] for t in range(1, t_count))
    ndim = sum(m - 1 for m in lengths)

    def result_for(splits, evaluations, achieved, incomplete):
        report = rate_report(geometry, prop, power, splits, k, perm, mode)
        return OptimumResult(
            rate=report.rate,
            report=report,
            splits=splits,
            evaluations=evaluations,
            achieved_tolerance=achieved,
            incomplete=incomplete,
            permutation=perm,
        )

    if ndim == 0:
        only = SplitMatrix(tuple((1.0,) * 1 for _ in lengths))
        return result_for(only, 1, 0.0, False)

    problem = compile_chain(geometry, prop, power, k, perm, mode)

    def evaluate(free):
        return batch_min_rate(problem, free_to_fractions(free, lengths))

    extras = []
    for sm in extra_splits:
        sm.validate_for(t_count, k, perm)
        extras.append(fractions_to_free(sm.as_flat(), lengths))

    best_free, _, evals, achieved, incomplete = _refine(
        evaluate, ndim, config, extra_points=extras
    )
    fracs = free_to_fractions(best_free[None, :], lengths)[0]
    splits = SplitMatrix.from_flat(fracs, lengths)
    return result_for(splits, evals, achieved, incomplete)


def optimize_permutation(
    geometry: NetworkGeometry,
    prop: PropagationModel,
    power: PowerConfig,
    k: int,
    mode: CombiningMode = CombiningMode.COHERENT,
    config: OptimizerConfig = OptimizerConfig(),
) -> OptimumResult:
    """Best relay ordering by exhaustive enumeration (T capped at 9)."""
    t_count = geometry.node_count
    if t_count > PERMUTATION_NODE_CAP:
        raise ValueError(
            f"permutation search enumerates (T-2)! orderings and is capped at "
            f"T={PERMUTATION_NODE_CAP}; pass an explicit permutation instead"
        )
    best = None
    total = 0
    for relays in itertools.permutations(range(2, t_count)):
        perm = Permutation((1,) + relays + (t_count,))
        res = optimize_splits(geometry, prop, power, k, perm, mode, config)
        total += res.evaluations
        if best is None or res.rate > best.rate:
            best = res
    return OptimumResult(
        rate=best.rate,
        report=best.report,
        splits=best.splits,
        evaluations=total,
        achieved_tolerance=best.achieved_tolerance,
        incomplete=best.incomplete,
        permutation=best.permutation,
    )


def optimize_spacing(
    span: float,
    node_count: int,
    k: int,
    power: PowerConfig,
    prop: PropagationModel,
    config: OptimizerConfig = OptimizerConfig(),
    mode: CombiningMode = CombiningMode.COHERENT,
    inner_config: OptimizerConfig = None,
) -> OptimumResult:
    """Best linear node placement with total length ``span``.

    Searches the T-1 positive spacings (a scaled simplex); when k >= 2 each
    candidate geometry is itself optimized over splits with a reduced inner
    budget.
    """
    if span <= 0.0:
        raise ValueError("span must be positive")
    perm = Permutation.identity(node_count)
    ndim = node_count - 2
    spacing_lengths = (node_count - 1,)
    if inner_config is None:
        inner_config = OptimizerConfig(
            resolution=min(config.resolution, 9),
            rounds=max(config.rounds - 1, 1),
            shrink=config.shrink,
            tolerance=config.tolerance,
            budget=max(2_000, config.budget // 200),
        )

    def geometry_for(free_row):
        fracs = free_to_fractions(free_row[None, :], spacing_lengths)[0]
        return build_linear_geometry(fracs * span)

    def single_rate(free_row):
        geom = geometry_for(free_row)
        if k == 1:
            splits = SplitMatrix.own_only(node_count, 1, perm)
            return rate_report(geom, prop, power, splits, 1, perm, mode).rate, 1
        res = optimize_splits(geom, prop, power, k, perm, mode, inner_config)
        return res.rate, res.evaluations

    inner_evals = 0

    def evaluate(free):
        nonlocal inner_evals
        out = np.empty(free.shape[0])
        for i in range(free.shape[0]):
            out[i], used = single_rate(free[i])
            inner_evals += used - 1
        return out

    # outer budget counts geometries; each costs one split optimization
    inner_cost = 1 if k == 1 else max(1, inner_config.budget)
    outer = OptimizerConfig(
        resolution=config.resolution,
        rounds=config.rounds,
        shrink=config.shrink,
        tolerance=config.tolerance,
        budget=max(300, config.budget // inner_cost),
    )
    best_free, _, evals, achieved, incomplete = _refine(
        evaluate, ndim, outer,
        box=(SPACING_EDGE_MARGIN, 1.0 - SPACING_EDGE_MARGIN),
    )
    geom = geometry_for(best_free)
    if k == 1:
        splits = SplitMatrix.own_only(node_count, 1, perm)
        report = rate_report(geom, prop, power, splits, 1, perm, mode)
        return OptimumResult(
            rate=report.rate,
            report=report,
            splits=splits,
            evaluations=evals + inner_evals,
            achieved_tolerance=achieved,
            incomplete=incomplete,
            geometry=geom,
            permutation=perm,
        )
    res = optimize_splits(geom, prop, power, k, perm, mode, inner_config)
    return OptimumResult(
        rate=res.rate,
        report=res.report,
        splits=res.splits,
        evaluations=evals + inner_evals + res.evaluations,
        achieved_tolerance=achieved,
        incomplete=incomplete,
        geometry=geom,
        permutation=perm,
    )


def optimize_rates_over_k(
    geometry: NetworkGeometry,
    prop: PropagationModel,
    power: PowerConfig,
    ks,
    perm: Permutation = None,
    mode: CombiningMode = CombiningMode.COHERENT,
    config: OptimizerConfig = OptimizerConfig(),
) -> dict:
    """Optimized rate per k, warm-starting each k from the smaller ones."""
    t_count = geometry.node_count
    perm = perm or Permutation.identity(t_count)
    results = {}
    for k in sorted(set(int(k) for k in ks)):
        extras = [
            res.splits.embed(t_count, prev_k, k, perm)
            for prev_k, res in results.items()
            if prev_k < k
        ]
        results[k] = optimize_splits(
            geometry, prop, power, k, perm, mode, config, extra_splits=extras
        )
    return results
