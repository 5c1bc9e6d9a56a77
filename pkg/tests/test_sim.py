import numpy as np
import pytest

from learndyn import DynamicsModel, simulate
from learndyn.errors import DivergenceError, DomainError, StructureError
from learndyn.lti import StateSpaceSiso
from learndyn.signals import AnalyticSignal, SampledSignal, SinusoidTerm, example1_signal
from learndyn.sim import cumulative_quad4, cumulative_trapezoid, num_steps, rk4_step

CUM_REWARD_RD_E1 = np.log((1 + np.e) / 2)  # 0.620115...


def test_grid_length():
    assert num_steps(1.0, 0.01) == 100
    assert num_steps(0.3, 0.1) == 3
    traj = simulate(DynamicsModel("rd", 2), example1_signal(), 1.0, 0.01)
    assert traj.t.size == 101
    assert traj.t[-1] == pytest.approx(1.0)
    with pytest.raises(DomainError):
        num_steps(1.0, 2.0)


def test_rd_constant_payoff_is_exact():
    sig = AnalyticSignal([0.4, -1.0, 2.0])
    traj = simulate(DynamicsModel("rd", 3), sig, 3.0, 0.01)
    np.testing.assert_allclose(traj.states[-1], 3.0 * np.array([0.4, -1.0, 2.0]), atol=1e-12)


def test_rk4_decay_and_order():
    # the first-order predictor state obeys x' = -x with zero input
    sig = AnalyticSignal([0.0])
    model = DynamicsModel("predictive_rd", 1, predictor=StateSpaceSiso([[-1.0]], [1.0], [1.0]))

    def err(h):
        traj = simulate(model, sig, 1.0, h, np.array([0.0, 1.0]))
        return abs(traj.states[-1, 1] - np.exp(-1))

    assert err(0.01) < 1e-9
    assert err(0.1) / err(0.05) == pytest.approx(16, rel=0.1)


def test_rk4_step_matches_simulate():
    model = DynamicsModel("anticipatory", 2)
    sig = example1_signal()
    traj = simulate(model, sig, 0.05, 0.01)
    y = model.start_state()
    for k in range(5):
        y = rk4_step(model, y, sig, k * 0.01, 0.01)
    np.testing.assert_allclose(y, traj.states[-1], atol=1e-15)


def test_rd_cumulative_reward_closed_form():
    traj = simulate(DynamicsModel("rd", 2), AnalyticSignal([1.0, 0.0]), 1.0, 1e-3)
    assert traj.cum_reward[-1] == pytest.approx(CUM_REWARD_RD_E1, abs=1e-5)
    assert traj.cum_reward[-1] == pytest.approx(0.620115, abs=1e-5)


@pytest.mark.parametrize("kind", ["rd", "exrd", "anticipatory", "predictive_rd", "oracle_rd", "predictive_exrd"])
def test_common_payoff_keeps_uniform_strategy(kind):
    sig = AnalyticSignal([0.5, 0.5, 0.5], [SinusoidTerm([2.0, 2.0, 2.0], 1.3)])
    traj = simulate(DynamicsModel(kind, 3), sig, 5.0, 0.01)
    np.testing.assert_allclose(traj.strategies, 1 / 3, atol=1e-13)


@pytest.mark.parametrize("kind", ["bnn", "smith", "tp"])
def test_strategy_dynamics_stay_on_simplex(kind):
    traj = simulate(DynamicsModel(kind, 2), example1_signal(), 50.0, 0.01)
    assert np.all(traj.strategies >= -1e-6)
    np.testing.assert_allclose(traj.strategies.sum(axis=1), 1.0, atol=1e-6)


def test_reward_accounting_and_average():
    traj = simulate(DynamicsModel("smith", 2), example1_signal(), 10.0, 0.01)
    np.testing.assert_array_equal(cumulative_trapezoid(traj.reward, traj.h), traj.cum_reward)
    assert traj.avg_reward[0] == traj.reward[0]
    np.testing.assert_allclose(traj.avg_reward[1:], traj.cum_reward[1:] / traj.t[1:])


def test_determinism():
    a = simulate(DynamicsModel("tp", 2), example1_signal(), 20.0, 0.01)
    b = simulate(DynamicsModel("tp", 2), example1_signal(), 20.0, 0.01)
    np.testing.assert_array_equal(a.states, b.states)
    np.testing.assert_array_equal(a.cum_reward, b.cum_reward)


def test_step_size_robustness():
    sig = example1_signal()
    for kind in ("bnn", "smith"):
        a = simulate(DynamicsModel(kind, 2), sig, 200.0, 0.01).final_average
        b = simulate(DynamicsModel(kind, 2), sig, 200.0, 0.005).final_average
        assert abs(a - b) < 1e-4


def test_sampled_signal_matches_analytic():
    t = np.linspace(0, 10, 20001)
    sampled = SampledSignal(t, np.column_stack([np.sin(t), np.full_like(t, 0.5)]))
    a = simulate(DynamicsModel("rd", 2), sampled, 10.0, 0.01)
    b = simulate(DynamicsModel("rd", 2), example1_signal(), 10.0, 0.01)
    assert abs(a.cum_reward[-1] - b.cum_reward[-1]) < 1e-5


def test_divergence_reports_step():
    sig = AnalyticSignal([1e308, -1e308])
    with pytest.raises(DivergenceError) as info:
        simulate(DynamicsModel("rd", 2), sig, 1.0, 0.01)
    assert info.value.step is not None
    assert info.value.model == "rd"


def test_signal_model_mismatch():
    with pytest.raises(StructureError):
        simulate(DynamicsModel("rd", 3), example1_signal(), 1.0, 0.01)


def test_quad4_is_fourth_order():
    t = np.linspace(0, 2, 201)
    exact = 1 - np.cos(t)
    assert np.max(np.abs(cumulative_quad4(np.sin(t), t[1]) - exact)) < 1e-9
    assert np.max(np.abs(cumulative_trapezoid(np.sin(t), t[1]) - exact)) > 1e-6
