import numpy as np
import pytest

from relayrates import (
    CombiningMode,
    OptimizerConfig,
    Permutation,
    PowerConfig,
    PropagationModel,
    SplitMatrix,
    build_linear_geometry,
    optimize_permutation,
    optimize_rates_over_k,
    optimize_spacing,
    optimize_splits,
    rate_report,
)
from relayrates.optimizer import fractions_to_free, free_to_fractions

PROP = PropagationModel()


def unit_chain(node_count, power=10.0):
    geom = build_linear_geometry([1.0] * (node_count - 1))
    return geom, PowerConfig.uniform(node_count, power)


def test_stick_breaking_round_trip():
    rng = np.random.default_rng(0)
    lengths = (4, 3, 2, 1)
    for _ in range(50):
        fracs = np.concatenate([rng.dirichlet(np.ones(m)) for m in lengths])
        free = fractions_to_free(fracs, lengths)
        back = free_to_fractions(free[None, :], lengths)[0]
        assert np.allclose(back, fracs, atol=1e-12)


def test_stick_breaking_stays_on_simplex():
    rng = np.random.default_rng(1)
    lengths = (3, 2)
    free = rng.random((200, 3))
    fracs = free_to_fractions(free, lengths)
    assert np.all(fracs >= 0.0)
    assert np.allclose(fracs[:, :3].sum(axis=1), 1.0, atol=1e-12)
    assert np.allclose(fracs[:, 3:].sum(axis=1), 1.0, atol=1e-12)


def test_optimizer_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(resolution=1)
    with pytest.raises(ValueError):
        OptimizerConfig(shrink=1.0)
    with pytest.raises(ValueError):
        OptimizerConfig(tolerance=0.0)


def test_k1_has_no_freedom():
    geom, power = unit_chain(5)
    res = optimize_splits(geom, PROP, power, 1)
    assert res.splits == SplitMatrix.own_only(5, 1)
    assert res.evaluations == 1


def test_optimum_is_reproducible():
    geom, power = unit_chain(5)
    a = optimize_splits(geom, PROP, power, 2)
    b = optimize_splits(geom, PROP, power, 2)
    assert a.rate == b.rate
    assert a.splits == b.splits
    assert a.evaluations == b.evaluations


def test_result_reevaluated_through_reference_path():
    geom, power = unit_chain(5, 3.0)
    res = optimize_splits(geom, PROP, power, 2)
    want = rate_report(geom, PROP, power, res.splits, 2)
    assert res.rate == want.rate
    assert res.report == want


def test_optimum_beats_fixed_heuristics():
    geom, power = unit_chain(5)
    res = optimize_splits(geom, PROP, power, 2)
    for guess in (SplitMatrix.own_only(5, 2), SplitMatrix.uniform(5, 2),
                  SplitMatrix.two_hop([0.5, 0.5, 0.5])):
        assert res.rate >= rate_report(geom, PROP, power, guess, 2).rate - 1e-9


def test_twohop_optimum_matches_scalar_scan():
    # 3-node chain has a single free split; compare against a fine scan
    geom, power = unit_chain(3)
    res = optimize_splits(geom, PROP, power, 2,
                          config=OptimizerConfig(rounds=6, tolerance=1e-12))
    best = max(
        rate_report(geom, PROP, power, SplitMatrix.two_hop([a]), 2).rate
        for a in np.linspace(0.0, 1.0, 20001)
    )
    assert res.rate >= best - 1e-8


def test_extra_splits_never_hurt():
    geom, power = unit_chain(6)
    plain = optimize_splits(geom, PROP, power, 3)
    seeded = optimize_splits(
        geom, PROP, power, 3,
        extra_splits=[SplitMatrix.uniform(6, 3)],
    )
    assert seeded.rate >= rate_report(
        geom, PROP, power, SplitMatrix.uniform(6, 3), 3
    ).rate - 1e-12
    assert seeded.rate >= plain.rate - 1e-9


def test_rates_over_k_monotone():
    rng = np.random.default_rng(7)
    geom = build_linear_geometry(rng.uniform(0.5, 1.5, 4))
    power = PowerConfig.uniform(5, 8.0)
    results = optimize_rates_over_k(geom, PROP, power, [1, 2, 3, 4])
    rates = [results[k].rate for k in (1, 2, 3, 4)]
    assert all(rates[i] <= rates[i + 1] + 1e-9 for i in range(3))


def test_budget_exhaustion_is_flagged():
    geom, power = unit_chain(6)
    res = optimize_splits(geom, PROP, power, 5,
                          config=OptimizerConfig(budget=100))
    assert res.incomplete


def test_identity_permutation_optimal_on_a_line():
    geom, power = unit_chain(5)
    res = optimize_permutation(geom, PROP, power, 2,
                               config=OptimizerConfig(budget=20_000))
    assert res.permutation == Permutation.identity(5)


def test_permutation_search_capped():
    geom, power = unit_chain(10)
    with pytest.raises(ValueError):
        optimize_permutation(geom, PROP, power, 1)


def test_spacing_search_beats_equal_spacing():
    power = PowerConfig.uniform(5, 10.0)
    equal = rate_report(
        build_linear_geometry([1.0] * 4), PROP, power,
        SplitMatrix.own_only(5, 1), 1,
    ).rate
    res = optimize_spacing(4.0, 5, 1, power, PROP,
                           config=OptimizerConfig(budget=20_000))
    assert res.geometry is not None
    assert res.geometry.distance(1, 5) == pytest.approx(4.0, rel=1e-9)
    assert res.rate >= equal - 1e-9
    # the source-side hops shrink to lift the early bottlenecks
    assert res.geometry.distance(1, 2) < 1.0


def test_fading_mode_threads_through():
    geom, power = unit_chain(5)
    coh = optimize_splits(geom, PROP, power, 2, mode=CombiningMode.COHERENT)
    fad = optimize_splits(geom, PROP, power, 2, mode=CombiningMode.FADING)
    assert fad.rate <= coh.rate + 1e-9
