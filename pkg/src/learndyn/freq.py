"""Asymptotic average reward of ``softmax o g(s) I_n`` under sinusoidal payoffs.

For ``p(t) = pbar sin(wt) + qbar cos(wt)`` the steady-state score is
``a pbar sin(wt - phi) + a qbar cos(wt - phi)`` with gain ``a`` and phase lag
``phi`` of ``g(jw)``. The long-run average reward is then a periodic
integral, evaluated here with the uniform trapezoid rule (spectrally
accurate for smooth periodic integrands).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .lti import to_frequency_point

DEFAULT_NODES = 1024
MIN_NODES = 64


@dataclass(frozen=True, eq=False)
class SinusoidEnv:
    pbar: np.ndarray
    qbar: np.ndarray
    omega: float = 1.0

    def __post_init__(self):
        pbar = np.asarray(self.pbar, dtype=float).reshape(-1)
        qbar = np.asarray(self.qbar, dtype=float).reshape(-1)
        if pbar.shape != qbar.shape:
            raise DomainError("pbar and qbar must have the same length")
        if not self.omega > 0:
            raise DomainError("omega must be positive")
        if not (np.any(pbar) or np.any(qbar)):
            raise DomainError("pbar and qbar cannot both be zero")
        object.__setattr__(self, "pbar", pbar)
        object.__setattr__(self, "qbar", qbar)

    @property
    def n(self):
        return self.pbar.size

    def payoff(self, t):
        t = np.asarray(t, dtype=float)[..., None]
        return self.pbar * np.sin(self.omega * t) + self.qbar * np.cos(self.omega * t)


FIG6_ENV = SinusoidEnv([1.0, -0.4, 0.6], [0.5, 0.1, -0.6], 1.0)


@dataclass(frozen=True, eq=False)
class SweepResult:
    phi: np.ndarray
    a: np.ndarray
    J: np.ndarray  # shape (len(phi), len(a))
    T1: np.ndarray
    factorization_residual: float


@dataclass(frozen=True)
class FreqComparison:
    gain: tuple
    phase_lag: tuple
    J: tuple
    rule: str  # "equal_gain", "equal_phase" or "none"
    predicted: str  # ">", "<", "=" or "" when no rule applies

    @property
    def consistent(self):
        """Whether the quadrature values agree with the predicted ordering."""
        j1, j2 = self.J
        tol = 1e-10 * (1 + abs(j1) + abs(j2))
        return {
            ">": j1 >= j2 - tol,
            "<": j1 <= j2 + tol,
            "=": abs(j1 - j2) <= tol,
            "": True,
        }[self.predicted]


def _nodes(N):
    if N < MIN_NODES:
        raise DomainError(f"need at least {MIN_NODES} quadrature nodes")
    return 2 * np.pi * np.arange(N) / N


def _softmax_rows(Z):
    W = np.exp(Z - Z.max(axis=1, keepdims=True))
    return W / W.sum(axis=1, keepdims=True)


def steady_state_score(env, point):
    """Steady-state score ``z(t)`` of ``g(s) I_n`` driven by ``env``, as a callable."""
    a, phi = point.gain, point.phase_lag
    if not a > 0:
        raise DomainError("gain must be positive")
    w = env.omega

    def z(t):
        t = np.asarray(t, dtype=float)[..., None]
        return a * env.pbar * np.sin(w * t - phi) + a * env.qbar * np.cos(w * t - phi)

    return z


def avg_reward_J(env, phi, a, N=DEFAULT_NODES):
    """``J(phi, a)``: average over one period of ``p^T softmax(z_ss)``."""
    u = _nodes(N)[:, None]
    p = env.pbar * np.sin(u) + env.qbar * np.cos(u)
    z = a * (env.pbar * np.sin(u - phi) + env.qbar * np.cos(u - phi))
    return float(np.mean(np.einsum("ij,ij->i", p, _softmax_rows(z))))


def _v_w(env, N):
    tau = _nodes(N)[:, None]
    v = env.pbar * np.sin(tau) + env.qbar * np.cos(tau)
    w = env.pbar * np.cos(tau) - env.qbar * np.sin(tau)
    return v, w


def t1_integral(env, a, N=DEFAULT_NODES):
    """Period average of ``v^T softmax(a v)``, ``v = pbar sin + qbar cos``. Never negative."""
    if not a > 0:
        raise DomainError("gain must be positive")
    v, _ = _v_w(env, N)
    return float(np.mean(np.einsum("ij,ij->i", v, _softmax_rows(a * v))))


def t2_integral(env, a, N=DEFAULT_NODES):
    """Period average of ``w^T softmax(a v)`` with ``w = v'``; zero for every ``a``."""
    if not a > 0:
        raise DomainError("gain must be positive")
    v, w = _v_w(env, N)
    return float(np.mean(np.einsum("ij,ij->i", w, _softmax_rows(a * v))))


def _jacobian_forms(env, a, N):
    v, w = _v_w(env, N)
    S = _softmax_rows(a * v)
    # u^T (diag(s) - s s^T) v, row-wise
    def form(x, y):
        return np.einsum("ij,ij,ij->i", x, S, y) - np.einsum("ij,ij->i", x, S) * np.einsum("ij,ij->i", S, y)

    return float(np.mean(form(v, v))), float(np.mean(form(w, v)))


def i1_integral(env, a, N=DEFAULT_NODES):
    """Period average of ``v^T grad_softmax(a v) v`` (nonnegative)."""
    return _jacobian_forms(env, a, N)[0]


def i2_integral(env, a, N=DEFAULT_NODES):
    """Period average of ``v'^T grad_softmax(a v) v`` (vanishes)."""
    return _jacobian_forms(env, a, N)[1]


def dJ_da(env, phi, a, N=DEFAULT_NODES):
    """Gain derivative of ``J`` as ``cos(phi) I1(a) + sin(phi) I2(a)``."""
    i1, i2 = _jacobian_forms(env, a, N)
    return np.cos(phi) * i1 + np.sin(phi) * i2


def sweep_phi_a(env, phi_grid, a_grid, N=DEFAULT_NODES):
    phi_grid = np.asarray(phi_grid, dtype=float)
    a_grid = np.asarray(a_grid, dtype=float)
    if phi_grid.size == 0 or a_grid.size == 0:
        raise DomainError("empty sweep grid")
    if np.any(np.abs(phi_grid) > np.pi / 2 + 1e-12):
        raise DomainError("sweep phase lags must lie in [-pi/2, pi/2]")
    J = np.array([[avg_reward_J(env, phi, a, N) for a in a_grid] for phi in phi_grid])
    T1 = np.array([t1_integral(env, a, N) for a in a_grid])
    resid = float(np.max(np.abs(J - np.cos(phi_grid)[:, None] * T1[None, :])))
    return SweepResult(phi_grid, a_grid, J, T1, resid)


def model_J(g, env, N=DEFAULT_NODES):
    """Asymptotic average reward of ``softmax o g(s) I_n`` at the env's frequency."""
    fp = to_frequency_point(g, env.omega)
    return avg_reward_J(env, fp.phase_lag, fp.gain, N)


def compare_models_freq(g1, g2, env, N=DEFAULT_NODES, rtol=1e-12):
    """Frequency-domain comparison of two score filters at ``env.omega``.

    Applies the fixed-gain rule (larger ``cos(phi)`` wins) when the gains
    agree, or the fixed-phase rule (larger gain wins when ``cos(phi) >= 0``)
    when the phases agree. Quadrature values of ``J`` are always returned.
    """
    f1 = to_frequency_point(g1, env.omega)
    f2 = to_frequency_point(g2, env.omega)
    j1 = avg_reward_J(env, f1.phase_lag, f1.gain, N)
    j2 = avg_reward_J(env, f2.phase_lag, f2.gain, N)
    same_gain = abs(f1.gain - f2.gain) <= rtol * max(f1.gain, f2.gain)
    same_phase = abs(f1.phase_lag - f2.phase_lag) <= 1e-12
    rule, predicted = "none", ""
    if same_gain and same_phase:
        rule, predicted = "equal_gain", "="
    elif same_gain:
        c1, c2 = np.cos(f1.phase_lag), np.cos(f2.phase_lag)
        rule = "equal_gain"
        predicted = ">" if c1 > c2 else "<" if c1 < c2 else "="
    elif same_phase and np.cos(f1.phase_lag) >= 0:
        rule = "equal_phase"
        predicted = ">" if f1.gain > f2.gain else "<"
    return FreqComparison((f1.gain, f2.gain), (f1.phase_lag, f2.phase_lag), (j1, j2), rule, predicted)
