"""Batch evaluation of max-min decode-forward rates over many split matrices.

The grid-refinement optimizer evaluates the same channel at hundreds of
thousands of candidate power splits, so the inner loop is compiled to a
flat array program once per channel (``compile_chain``) and then executed
either by the Cython extension or by a vectorized numpy fallback.  Set
``RELAYRATES_FORCE_PY=1`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .channel import NetworkGeometry, PowerConfig, PropagationModel, gain
from .coding import CombiningMode, Permutation, row_lengths

try:  # compiled extension is optional; the numpy path is always available
    if os.environ.get("RELAYRATES_FORCE_PY"):
        raise ImportError("forced pure-python kernel")
    from . import _chainkernel  # type: ignore[attr-defined]

    BACKEND = "cython"
except ImportError:
    _chainkernel = None
    BACKEND = "python"

KIND_SIG = 0
KIND_INT = 1


@dataclass(frozen=True)
class ChainProblem:
    """Flat description of one channel ready for batch rate evaluation."""

    n_receivers: int
    n_cols: int
    grp_rcv: np.ndarray     # int32, receiver index per group
    grp_kind: np.ndarray    # int8, KIND_SIG or KIND_INT
    grp_ptr: np.ndarray     # int64, CSR pointers into the entry arrays
    ent_const: np.ndarray   # float64, gain * transmit power per carrier
    ent_col: np.ndarray     # int32, flat split-matrix column per carrier
    noise: np.ndarray       # float64 per receiver
    coherent: bool
    row_lengths: tuple      # split-row length per transmitter node


def compile_chain(
    geometry: NetworkGeometry,
    prop: PropagationModel,
    power: PowerConfig,
    k: int,
    perm: Permutation,
    mode: CombiningMode,
) -> ChainProblem:
    t_count = geometry.node_count
    lengths = row_lengths(t_count, k, perm)
    lengths_seq = tuple(lengths[t] for t in range(1, t_count))
    col_offset = np.concatenate([[0], np.cumsum(lengths_seq)])

    grp_rcv, grp_kind, grp_ptr = [], [], [0]
    ent_const, ent_col = [], []
    for receiver in range(2, t_count + 1):
        pos_r = perm.position_of(receiver)
        for q in range(1, t_count):
            if pos_r <= q <= pos_r + k - 1:
                continue  # cancelled sub-signals
            kind = KIND_SIG if max(1, pos_r - k) <= q <= pos_r - 1 else KIND_INT
            entries = []
            for p in range(max(1, q - k + 1), q + 1):
                node = perm.node_at(p)
                if q - p > lengths[node] - 1 or node == receiver:
                    continue
                entries.append((
                    gain(geometry, prop, node, receiver) * power.transmit_power(node),
                    col_offset[node - 1] + (q - p),
                ))
            if not entries:
                continue
            grp_rcv.append(receiver - 2)
            grp_kind.append(kind)
            for c, col in entries:
                ent_const.append(c)
                ent_col.append(col)
            grp_ptr.append(len(ent_const))

    return ChainProblem(
        n_receivers=t_count - 1,
        n_cols=int(col_offset[-1]),
        grp_rcv=np.asarray(grp_rcv, dtype=np.int32),
        grp_kind=np.asarray(grp_kind, dtype=np.int8),
        grp_ptr=np.asarray(grp_ptr, dtype=np.int64),
        ent_const=np.asarray(ent_const, dtype=np.float64),
        ent_col=np.asarray(ent_col, dtype=np.int32),
        noise=np.asarray(
            [power.noise_power(t) for t in range(2, t_count + 1)], dtype=np.float64
        ),
        coherent=mode is CombiningMode.COHERENT,
        row_lengths=lengths_seq,
    )


def batch_min_rate_py(problem: ChainProblem, cands: np.ndarray) -> np.ndarray:
    """Numpy fallback: vectorized over candidates, looping over groups."""
    cands = np.ascontiguousarray(cands, dtype=np.float64)
    n = cands.shape[0]
    p_sig = np.zeros((problem.n_receivers, n))
    p_int = np.zeros((problem.n_receivers, n))
    ptr = problem.grp_ptr
    for g in range(problem.grp_rcv.size):
        lo, hi = ptr[g], ptr[g + 1]
        cols = problem.ent_col[lo:hi]
        consts = problem.ent_const[lo:hi]
        parts = consts[None, :] * cands[:, cols]
        if problem.coherent:
            term = np.square(np.sqrt(parts).sum(axis=1))
        else:
            term = parts.sum(axis=1)
        if problem.grp_kind[g] == KIND_SIG:
            p_sig[problem.grp_rcv[g]] += term
        else:
            p_int[problem.grp_rcv[g]] += term
    rates = 0.5 * np.log2(1.0 + p_sig / (problem.noise[:, None] + p_int))
    return rates.min(axis=0)


def batch_min_rate(problem: ChainProblem, cands: np.ndarray) -> np.ndarray:
    """Max-min rate over all receivers for each candidate flat split vector."""
    cands = np.ascontiguousarray(cands, dtype=np.float64)
    if cands.ndim != 2 or cands.shape[1] != problem.n_cols:
        raise ValueError(
            f"candidates must have shape (n, {problem.n_cols}), got {cands.shape}"
        )
    if _chainkernel is not None:
        out = np.empty(cands.shape[0], dtype=np.float64)
        _chainkernel.batch_min_rate(
            cands,
            problem.n_receivers,
            problem.grp_rcv,
            problem.grp_kind,
            problem.grp_ptr,
            problem.ent_const,
            problem.ent_col,
            problem.noise,
            problem.coherent,
            out,
        )
        return out
    return batch_min_rate_py(problem, cands)
