import numpy as np
import pytest

from learndyn.dynamics import (DynamicsModel, Kind, is_matched_pair, matched_initialization, output,
                               score, split_state, vector_field)
from learndyn.errors import ConfigurationError, DomainError, StructureError
from learndyn.lti import StateSpaceSiso, lowpass_predictor
from learndyn.simplex import softmax


def test_rd_and_oracle_fields():
    m = DynamicsModel("rd", 2)
    np.testing.assert_allclose(vector_field(m, [3.0, -1.0], [1.0, 0.0]), [1.0, 0.0])
    o = DynamicsModel("oracle_rd", 2)
    np.testing.assert_allclose(vector_field(o, [0.0, 0.0], [1.0, 0.0]), [1.0, 0.0])
    np.testing.assert_allclose(output(o, [0.0, 0.0], [1.0, 0.0]), [0.7310585786, 0.2689414214])
    assert o.meta["causal"] is False
    with pytest.raises(StructureError):
        output(o, [0.0, 0.0])


@pytest.mark.parametrize("kind, expected", [("bnn", [0.25, -0.25]), ("smith", [0.5, -0.5]), ("tp", [0.5, -0.5])])
def test_strategy_dynamics_examples(kind, expected):
    m = DynamicsModel(kind, 2)
    np.testing.assert_allclose(vector_field(m, [0.5, 0.5], [1.0, 0.0]), expected, atol=1e-15)


def test_anticipatory_field():
    m = DynamicsModel("anticipatory", 2)
    np.testing.assert_allclose(vector_field(m, np.zeros(4), [1.0, 0.0]), [2.0, 0.0, 1.0, 0.0])


def test_predictive_exrd_output_doubles_score():
    m = DynamicsModel("predictive_exrd", 3)
    z = np.array([0.2, -0.4, 1.0])
    np.testing.assert_allclose(output(m, np.concatenate([z, z])), softmax(2 * z))


@pytest.mark.parametrize("kind", ["bnn", "smith", "tp"])
def test_simplex_tangency(kind):
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        x = rng.dirichlet(np.ones(n))
        dx = vector_field(DynamicsModel(kind, n), x, rng.normal(0, 2, n))
        assert abs(dx.sum()) < 1e-12


def test_rd_uniform_on_span_of_ones():
    m = DynamicsModel("rd", 4)
    np.testing.assert_allclose(output(m, np.full(4, 2.7)), 0.25)


def test_state_validation():
    with pytest.raises(StructureError):
        vector_field(DynamicsModel("anticipatory", 2), np.zeros(3), [1.0, 0.0])
    with pytest.raises(StructureError):
        DynamicsModel("bnn", 2, initial_state=[0.7, 0.7])
    with pytest.raises(DomainError):
        DynamicsModel("exrd", 2, lam=0.0)
    with pytest.raises(DomainError):
        DynamicsModel("predictive_rd", 2, predictor=StateSpaceSiso([[1.0]], [1.0], [1.0]))
    with pytest.raises(ConfigurationError):
        DynamicsModel("mwu", 2)


def test_predictive_rd_layout_is_channel_major():
    h = StateSpaceSiso([[-1.0, 0.0], [0.0, -2.0]], [1.0, 1.0], [1.0, 1.0])
    m = DynamicsModel("predictive_rd", 3, predictor=h)
    assert m.state_size == 3 + 6
    state = np.arange(9.0)
    parts = split_state(m, state)
    np.testing.assert_allclose(parts["x_h"], [[3, 4], [5, 6], [7, 8]])
    np.testing.assert_allclose(score(m, state), state[:3] + parts["x_h"] @ h.C)


def test_matched_initialization():
    a, b = matched_initialization("rd", "oracle_rd", 3)
    np.testing.assert_array_equal(a, np.zeros(3))
    np.testing.assert_array_equal(b, np.zeros(3))
    e, pe = matched_initialization("exrd", "predictive_exrd", 2, alpha=0.5)
    np.testing.assert_array_equal(pe, [0.5] * 4)
    np.testing.assert_array_equal(e, [0.5] * 2)
    r, ant = matched_initialization("rd", "anticipatory", 5)
    np.testing.assert_array_equal(ant, np.zeros(10))
    assert is_matched_pair("anticipatory", "rd")
    with pytest.raises(ConfigurationError):
        matched_initialization("rd", "bnn", 2)


def test_anticipatory_equals_lowpass_predictive_rd():
    from learndyn.signals import example3_signal
    from learndyn.sim import simulate

    sig = example3_signal()
    gamma, lam = 0.7, 1.3
    ant = simulate(DynamicsModel("anticipatory", 5, lam=lam, gamma=gamma), sig, 20, 0.01)
    pr = simulate(DynamicsModel("predictive_rd", 5, predictor=lowpass_predictor(gamma, lam)), sig, 20, 0.01)
    assert np.max(np.abs(ant.strategies - pr.strategies)) < 1e-9


def test_kind_enum_covers_all_rules():
    assert {k.value for k in Kind} == {"rd", "bnn", "smith", "tp", "exrd", "anticipatory",
                                       "predictive_rd", "oracle_rd", "predictive_exrd"}
