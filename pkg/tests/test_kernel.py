import numpy as np
import pytest

from relayrates import (
    CombiningMode,
    Permutation,
    PowerConfig,
    PropagationModel,
    SplitMatrix,
    batch_min_rate,
    build_linear_geometry,
    compile_chain,
    rate_report,
)
from relayrates.coding import row_lengths
from relayrates.kernel import BACKEND, batch_min_rate_py


def make_problem(node_count, k, seed=0, mode=CombiningMode.COHERENT):
    rng = np.random.default_rng(seed)
    geom = build_linear_geometry(rng.uniform(0.5, 2.0, node_count - 1))
    power = PowerConfig(rng.uniform(0.5, 20.0, node_count - 1),
                        rng.uniform(0.5, 3.0, node_count - 1))
    perm = Permutation.identity(node_count)
    problem = compile_chain(geom, PropagationModel(), power, k, perm, mode)
    lengths = tuple(row_lengths(node_count, k, perm)[t] for t in range(1, node_count))
    return geom, power, perm, problem, lengths


def random_fractions(rng, lengths, n):
    cols = []
    for m in lengths:
        cols.append(rng.dirichlet(np.ones(m), size=n))
    return np.concatenate(cols, axis=1)


@pytest.mark.parametrize("node_count,k", [(4, 1), (5, 2), (5, 4), (7, 3)])
@pytest.mark.parametrize("mode", [CombiningMode.COHERENT, CombiningMode.FADING])
def test_kernel_matches_reference_rates(node_count, k, mode):
    rng = np.random.default_rng(1)
    geom, power, perm, problem, lengths = make_problem(node_count, k, mode=mode)
    cands = random_fractions(rng, lengths, 20)
    rates = batch_min_rate(problem, cands)
    for i in range(cands.shape[0]):
        splits = SplitMatrix.from_flat(cands[i], lengths)
        want = rate_report(geom, PropagationModel(), power, splits, k, perm, mode).rate
        assert rates[i] == pytest.approx(want, rel=1e-12)


def test_python_fallback_agrees_with_dispatch():
    rng = np.random.default_rng(2)
    _, _, _, problem, lengths = make_problem(6, 3)
    cands = random_fractions(rng, lengths, 500)
    a = batch_min_rate(problem, cands)
    b = batch_min_rate_py(problem, cands)
    assert np.array_equal(a, b) or np.max(np.abs(a - b)) < 1e-13


def test_backend_reported():
    assert BACKEND in ("cython", "python")


def test_shape_validation():
    _, _, _, problem, lengths = make_problem(5, 2)
    with pytest.raises(ValueError):
        batch_min_rate(problem, np.ones((3, sum(lengths) + 1)))
