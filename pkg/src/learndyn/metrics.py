"""Regret, reward gaps and dissipation checks on simulated trajectories."""

from dataclasses import dataclass

import numpy as np

from .dynamics import DynamicsModel, Kind, matched_initialization
from .errors import DomainError, StructureError
from .sim import cumulative_quad4, cumulative_trapezoid, simulate
from .simplex import is_simplex, softmax_k

GAP_RTOL = 1e-9


@dataclass(frozen=True)
class RewardReport:
    horizon: float
    cumulative_reward: float
    average_reward: float
    vertex_regrets: np.ndarray
    best_fixed_regret: float


@dataclass(frozen=True, eq=False)
class GapReport:
    t: np.ndarray
    gap: np.ndarray
    min_gap: float
    argmin_t: float
    tolerance: np.ndarray
    uniform: bool

    @property
    def verdict(self):
        return "uniform" if self.uniform else "violated"

    @property
    def worst_margin(self):
        """Smallest ``gap + tolerance`` over the grid (negative means violated)."""
        return float(np.min(self.gap + self.tolerance))


def _grid_payoffs(traj, signal):
    if signal.n != traj.model.n:
        raise StructureError("signal and trajectory disagree on the number of actions")
    return np.asarray(signal(traj.t), dtype=float)


def regret_vs_fixed(traj, signal, xbar):
    """``int_0^T p(t)^T (xbar - x(t)) dt`` by the trapezoid rule."""
    xbar = np.asarray(xbar, dtype=float)
    if xbar.shape != (traj.model.n,):
        raise StructureError(f"fixed strategy must have length {traj.model.n}")
    if not is_simplex(xbar, 1e-9):
        raise DomainError("fixed strategy must lie on the simplex")
    p = _grid_payoffs(traj, signal)
    integrand = p @ xbar - np.einsum("ij,ij->i", p, traj.strategies)
    return float(cumulative_trapezoid(integrand, traj.h)[-1])


def vertex_regrets(traj, signal):
    n = traj.model.n
    return np.array([regret_vs_fixed(traj, signal, np.eye(n)[i]) for i in range(n)])


def best_fixed_regret(traj, signal):
    """Regret against the best fixed strategy in hindsight.

    The regret is affine in the comparator, so the supremum over the simplex
    is attained at a vertex.
    """
    return float(np.max(vertex_regrets(traj, signal)))


def reward_report(traj, signal):
    vr = vertex_regrets(traj, signal)
    return RewardReport(traj.T, float(traj.cum_reward[-1]), traj.final_average, vr, float(vr.max()))


def reward_gap(traj_a, traj_b, signal=None, rtol=GAP_RTOL):
    """Cumulative-reward gap ``P_a(t) - P_b(t)`` and a uniform-dominance verdict.

    ``a`` dominates ``b`` on the grid when the gap never drops below
    ``-rtol * (1 + |P_a(t)|)``.
    """
    if traj_a.t.shape != traj_b.t.shape or traj_a.h != traj_b.h:
        raise StructureError("trajectories are on different time grids")
    if signal is not None:
        p = _grid_payoffs(traj_a, signal)
        if not (np.allclose(p, traj_a.payoffs, rtol=0, atol=1e-12)
                and np.allclose(p, traj_b.payoffs, rtol=0, atol=1e-12)):
            raise StructureError("trajectories were not driven by this signal")
    gap = traj_a.cum_reward - traj_b.cum_reward
    tol = rtol * (1.0 + np.abs(traj_a.cum_reward))
    k = int(np.argmin(gap))
    return GapReport(traj_a.t, gap, float(gap[k]), float(traj_a.t[k]), tol,
                     bool(np.all(gap >= -tol)))


def simulate_pair(model_a, model_b, signal, T, h, alpha=0.0):
    """Simulate two models from matched initial conditions and return both trajectories."""
    order = 1
    for m in (model_a, model_b):
        if m.kind is Kind.PREDICTIVE_RD:
            order = m.predictor.order
    sa, sb = matched_initialization(model_a.kind, model_b.kind, model_a.n, alpha, order)
    return simulate(model_a, signal, T, h, sa), simulate(model_b, signal, T, h, sb)


def exrd_storage(xi, s):
    """``KL(softmax(xi) || uniform) / (1 + s)^2`` row-wise, via ``ln n + xi.sigma - lse``."""
    xi = np.atleast_2d(xi)
    n = xi.shape[1]
    vmax = xi.max(axis=1, keepdims=True)
    w = np.exp(xi - vmax)
    sig = w / w.sum(axis=1, keepdims=True)
    lse = vmax[:, 0] + np.log(w.sum(axis=1))
    return (np.log(n) + np.einsum("ij,ij->i", xi, sig) - lse) / (1.0 + s) ** 2


def dissipation_residual_exrd(signal, T, h, s_param, alpha=0.0):
    """Worst violation of the storage inequality for the Ex-RD comparison system.

    Simulates Ex-RD (``lam = 1``) from ``z(0) = alpha 1``, forms
    ``xi = (1 + s) z`` and output ``y = grad_softmax(xi) xi / (1 + s)``, and
    returns ``max_t [V(xi(t)) - V(xi(0)) - int_0^t p^T y]``. A passive
    comparison system gives a value ``<= 0`` up to discretisation error.
    """
    if not 0.0 <= s_param <= 1.0:
        raise DomainError("s must lie in [0, 1]")
    model = DynamicsModel(Kind.EXRD, signal.n, lam=1.0)
    traj = simulate(model, signal, T, h, np.full(signal.n, float(alpha)))
    xi = (1.0 + s_param) * traj.states
    sig = np.array([softmax_k(row) for row in xi])
    # grad_softmax(xi) xi = sig * xi - sig (sig . xi)
    jac_xi = sig * xi - sig * np.einsum("ij,ij->i", sig, xi)[:, None]
    y = jac_xi / (1.0 + s_param)
    supply = cumulative_quad4(np.einsum("ij,ij->i", traj.payoffs, y), h)
    V = exrd_storage(xi, s_param)
    return float(np.max(V - V[0] - supply))
