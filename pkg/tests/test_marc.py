import math
from dataclasses import replace

import numpy as np
import pytest

from relayrates import (
    ChannelValidationError,
    MarcConfig,
    OptimizerConfig,
    marc_omniscient_sumrate,
    marc_onehop_sumrate,
    marc_optimize,
)


def test_geometry_is_derived_from_d34():
    cfg = MarcConfig(d34=1.0)
    assert cfg.d13 == 1.0 and cfg.d23 == 1.0
    want = math.sqrt((math.sqrt(3.0) / 2.0 + 1.0) ** 2 + 0.25)
    assert cfg.d14 == pytest.approx(want)
    assert cfg.d24 == cfg.d14


def test_config_validation():
    with pytest.raises(ChannelValidationError):
        MarcConfig(p1=-1.0)
    with pytest.raises(ChannelValidationError):
        MarcConfig(n3=0.0)
    with pytest.raises(ChannelValidationError):
        MarcConfig(beta1=0.7, beta2=0.5)
    with pytest.raises(ChannelValidationError):
        MarcConfig(alpha1=1.5)
    with pytest.raises(ChannelValidationError):
        MarcConfig(d34=0.0)


def test_onehop_relay_rate_reference_value():
    # both sources at 10 W and unit distance into the relay: (P1+P2)/N3 = 20
    rates = marc_onehop_sumrate(MarcConfig())
    assert rates.r3 == pytest.approx(0.5 * math.log2(21.0), abs=1e-12)


def test_onehop_destination_hears_sources_as_noise():
    cfg = MarcConfig()
    rates = marc_onehop_sumrate(cfg)
    interference = cfg.p1 / cfg.d14 ** 2 + cfg.p2 / cfg.d24 ** 2
    want = 0.5 * math.log2(1.0 + (cfg.p3 / cfg.d34 ** 2) / (1.0 + interference))
    assert rates.r4 == pytest.approx(want, rel=1e-12)
    assert rates.sum_rate == min(rates.r3, rates.r4)


def test_omniscient_reduces_to_onehop_at_zero_alpha():
    cfg = MarcConfig(alpha1=0.0, alpha2=0.0)
    omni = marc_omniscient_sumrate(cfg)
    oh = marc_onehop_sumrate(cfg)
    assert omni.r3 == pytest.approx(oh.r3, rel=1e-12)
    # destination decodes the sources under omniscient coding, so its rate
    # reflects their full received power instead of treating it as noise
    direct = cfg.p1 / cfg.d14 ** 2 + cfg.p2 / cfg.d24 ** 2 + cfg.p3 / cfg.d34 ** 2
    assert omni.r4 == pytest.approx(0.5 * math.log2(1.0 + direct), rel=1e-12)


def test_omniscient_never_below_onehop_after_optimization():
    rng = np.random.default_rng(0)
    opt = OptimizerConfig(rounds=4, budget=3000)
    for _ in range(200):
        cfg = MarcConfig(
            p1=float(rng.uniform(0.1, 50)), p2=float(rng.uniform(0.1, 50)),
            p3=float(rng.uniform(0.1, 50)), d34=float(rng.uniform(0.2, 3.0)),
        )
        oh = marc_onehop_sumrate(cfg).sum_rate
        best = marc_optimize(cfg, "omniscient", opt).sum_rate
        assert best >= oh - 1e-9


def test_coherent_gain_monotone_in_alpha_at_destination():
    cfg = MarcConfig()
    r4 = [
        marc_omniscient_sumrate(replace(cfg, alpha1=a, alpha2=a)).r4
        for a in np.linspace(0.0, 1.0, 11)
    ]
    assert all(r4[i] <= r4[i + 1] + 1e-12 for i in range(10))


def test_onehop_power_sweep_finds_balance_point():
    opt = OptimizerConfig(resolution=41, rounds=10, tolerance=1e-12, budget=10_000)
    res = marc_optimize(MarcConfig(), "onehop", opt, sweep_source_power=(0.1, 10.0))
    assert abs(res.rates.r3 - res.rates.r4) < 1e-6
    assert res.config.p1 == res.config.p2


def test_asymmetric_search_at_least_matches_symmetric():
    cfg = MarcConfig(p1=30.0, p2=5.0)
    opt = OptimizerConfig(rounds=3, budget=30_000)
    sym = marc_optimize(cfg, "omniscient", opt)
    asym = marc_optimize(cfg, "omniscient", opt, asymmetric=True)
    assert asym.sum_rate >= sym.sum_rate - 1e-6


def test_which_validated():
    with pytest.raises(ValueError):
        marc_optimize(MarcConfig(), "threehop")
