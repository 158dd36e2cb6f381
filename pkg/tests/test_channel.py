import numpy as np
import pytest

from relayrates import (
    ChannelValidationError,
    NetworkGeometry,
    PowerConfig,
    PropagationModel,
    build_linear_geometry,
    gain,
    received_power,
)


def test_linear_geometry_distances_add():
    geom = build_linear_geometry([1.0, 2.0, 0.5])
    assert geom.node_count == 4
    assert geom.distance(1, 4) == pytest.approx(3.5)
    assert geom.distance(2, 4) == pytest.approx(2.5)
    assert geom.distance(3, 1) == geom.distance(1, 3)


def test_geometry_rejects_asymmetry_and_zero_distance():
    with pytest.raises(ChannelValidationError):
        NetworkGeometry([[0, 1, 2], [1.5, 0, 1], [2, 1, 0]])
    with pytest.raises(ChannelValidationError):
        NetworkGeometry([[0, 0, 2], [0, 0, 1], [2, 1, 0]])
    with pytest.raises(ChannelValidationError):
        NetworkGeometry(np.zeros((2, 2)))


def test_geometry_is_read_only():
    geom = build_linear_geometry([1.0, 1.0])
    with pytest.raises(ValueError):
        geom.distances[0, 1] = 5.0


def test_propagation_eta_floor():
    PropagationModel(eta=2.0)
    PropagationModel(eta=1.5, allow_low_eta=True)
    with pytest.raises(ChannelValidationError):
        PropagationModel(eta=1.5)
    with pytest.raises(ChannelValidationError):
        PropagationModel(eta=1.0, allow_low_eta=True)
    with pytest.raises(ChannelValidationError):
        PropagationModel(kappa=0.0)


def test_gain_is_inverse_power_law():
    geom = build_linear_geometry([2.0, 1.0])
    prop = PropagationModel(kappa=3.0, eta=2.0)
    assert gain(geom, prop, 1, 2) == pytest.approx(3.0 / 4.0)
    assert gain(geom, prop, 1, 3) == pytest.approx(3.0 / 9.0)
    with pytest.raises(ChannelValidationError):
        gain(geom, prop, 2, 2)


def test_received_power():
    geom = build_linear_geometry([1.0, 1.0])
    prop = PropagationModel()
    power = PowerConfig([4.0, 9.0], [1.0, 1.0])
    assert received_power(geom, prop, power, 1, 3) == pytest.approx(1.0)
    assert received_power(geom, prop, power, 2, 3) == pytest.approx(9.0)
    with pytest.raises(ChannelValidationError):
        received_power(geom, prop, power, 3, 2)


def test_power_config_validation():
    with pytest.raises(ChannelValidationError):
        PowerConfig([1.0, 2.0], [1.0])
    with pytest.raises(ChannelValidationError):
        PowerConfig([-1.0, 2.0], [1.0, 1.0])
    with pytest.raises(ChannelValidationError):
        PowerConfig([1.0, 2.0], [0.0, 1.0])
    uni = PowerConfig.uniform(5, 10.0, 2.0)
    assert uni.transmit_power(4) == 10.0
    assert uni.noise_power(5) == 2.0
