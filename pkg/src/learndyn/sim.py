"""Fixed-step RK4 simulation of a learning rule against a payoff signal."""

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .dynamics import DynamicsModel, check_state
from .errors import DivergenceError, DomainError, StructureError

DEFAULT_STEP = 1e-2
DEFAULT_HORIZON = 1000.0


def num_steps(T, h):
    """Number of RK4 steps on ``[0, T]``; the grid has ``floor(T/h) + 1`` points."""
    if not (T > 0 and h > 0 and h <= T):
        raise DomainError(f"need T > 0 and 0 < h <= T (got T={T}, h={h})")
    return int(np.floor(T / h + 1e-9))


def cumulative_trapezoid(values, h):
    """Running trapezoid integral on a uniform grid, starting at 0."""
    values = np.asarray(values, dtype=float)
    out = np.zeros_like(values)
    out[1:] = np.cumsum(0.5 * h * (values[1:] + values[:-1]), axis=0)
    return out


def cumulative_quad4(values, h):
    """Running integral with fourth-order accuracy on a uniform grid.

    Each panel uses the cubic through the four nearest samples, so
    ``values`` needs at least four points; shorter inputs fall back to the
    trapezoid rule.
    """
    f = np.asarray(values, dtype=float)
    if f.shape[0] < 4:
        return cumulative_trapezoid(f, h)
    panels = np.empty(f.shape[0] - 1)
    panels[1:-1] = -f[:-3] + 13.0 * f[1:-2] + 13.0 * f[2:-1] - f[3:]
    panels[0] = 9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]
    panels[-1] = f[-4] - 5.0 * f[-3] + 19.0 * f[-2] + 9.0 * f[-1]
    out = np.zeros_like(f)
    out[1:] = np.cumsum(panels * (h / 24.0))
    return out


@dataclass(frozen=True, eq=False)
class Trajectory:
    model: DynamicsModel
    h: float
    t: np.ndarray
    states: np.ndarray
    strategies: np.ndarray
    payoffs: np.ndarray
    reward: np.ndarray
    cum_reward: np.ndarray
    avg_reward: np.ndarray

    @property
    def T(self):
        return float(self.t[-1])

    @property
    def final_average(self):
        return float(self.avg_reward[-1])

    def state_part(self, name):
        from .dynamics import state_layout

        a, b = state_layout(self.model)[name]
        return self.states[:, a:b]


def _check_signal(model, signal):
    if signal.n != model.n:
        raise StructureError(f"signal has {signal.n} channels, model {model.name} has {model.n}")


def rk4_step(model, state, signal, t, h):
    """One classical RK4 step from ``t`` to ``t + h``."""
    if not h > 0:
        raise DomainError("step size must be positive")
    _check_signal(model, signal)
    state = check_state(model, state)
    A, B, C = model.kernel_predictor()
    p0, pm, p1 = (np.asarray(signal(s), dtype=float) for s in (t, t + 0.5 * h, t + h))
    out = K.rk4_step_k(model.code, model.n, float(model.lam), float(model.gamma),
                       A, B, C, state, p0, pm, p1, float(h))
    if not np.all(np.isfinite(out)):
        raise DivergenceError("non-finite state after RK4 step", model=model.name)
    return out


def simulate(model, signal, T=DEFAULT_HORIZON, h=DEFAULT_STEP, state0=None):
    """Integrate ``model`` driven by ``signal`` on ``[0, T]`` with step ``h``.

    Rewards ``p(t)^T x(t)`` are accumulated with the trapezoid rule on the
    same grid. The running average is ``cum / t`` with the instantaneous
    reward standing in at ``t = 0``.
    """
    _check_signal(model, signal)
    nsteps = num_steps(T, h)
    y0 = model.start_state() if state0 is None else check_state(model, state0)
    A, B, C = model.kernel_predictor()
    states, strategies, payoffs, bad = K.integrate_k(
        model.code, model.n, float(model.lam), float(model.gamma), A, B, C,
        np.ascontiguousarray(y0, dtype=float), nsteps, float(h), *signal.kernel_args()
    )
    if bad >= 0:
        raise DivergenceError("integration produced non-finite state", step=int(bad), model=model.name)
    t = np.arange(nsteps + 1) * float(h)
    reward = np.einsum("ij,ij->i", payoffs, strategies)
    cum = cumulative_trapezoid(reward, h)
    avg = np.empty_like(cum)
    avg[0] = reward[0]
    avg[1:] = cum[1:] / t[1:]
    return Trajectory(model, float(h), t, states, strategies, payoffs, reward, cum, avg)
