"""Hot loops: vector fields, output maps, payoff evaluation and RK4.

Everything here takes plain arrays and integer codes so it compiles under
numba; with ``LEARNDYN_NUMBA=0`` the same code runs as ordinary numpy.
State layouts (``n`` actions, ``m`` predictor order):

    rd, exrd, oracle_rd   [score(n)]
    bnn, smith, tp        [strategy(n)]
    anticipatory          [z(n), q(n)]
    predictive_rd         [r(n), x_h(n*m)]  channel-major: x_h[i*m:(i+1)*m]
    predictive_exrd       [r(n), m(n)]
"""

import numpy as np

from ._jit import njit
from .simplex import project_simplex_k, softmax_k

RD, EXRD, BNN, SMITH, TP, ANTICIPATORY, PREDICTIVE_RD, ORACLE_RD, PREDICTIVE_EXRD = range(9)


@njit
def payoff_k(t, sig_kind, offset, amps, omegas, phases, waves, samp_t, samp_p):
    if sig_kind == 0:
        p = offset.copy()
        for k in range(omegas.shape[0]):
            arg = omegas[k] * t + phases[k]
            if waves[k] == 0:
                p += amps[k] * np.sin(arg)
            else:
                p += amps[k] * np.cos(arg)
        return p
    last = samp_t.shape[0] - 1
    if t <= samp_t[0]:
        return samp_p[0].copy()
    if t >= samp_t[last]:
        return samp_p[last].copy()
    j = np.searchsorted(samp_t, t, side="right") - 1
    w = (t - samp_t[j]) / (samp_t[j + 1] - samp_t[j])
    return (1.0 - w) * samp_p[j] + w * samp_p[j + 1]


@njit
def field_k(kind, n, lam, gamma, A, B, C, y, p):
    dy = np.empty_like(y)
    if kind == RD or kind == ORACLE_RD:
        dy[:] = p
    elif kind == EXRD:
        dy[:] = lam * (p - y)
    elif kind == BNN:
        x = y
        excess = np.maximum(p - np.sum(x * p), 0.0)
        dy[:] = excess - x * np.sum(excess)
    elif kind == SMITH:
        x = y
        for i in range(n):
            inflow = 0.0
            outflow = 0.0
            for j in range(n):
                inflow += x[j] * max(p[i] - p[j], 0.0)
                outflow += max(p[j] - p[i], 0.0)
            dy[i] = inflow - x[i] * outflow
    elif kind == TP:
        dy[:] = project_simplex_k(y + p) - y
    elif kind == ANTICIPATORY:
        lead = lam * (p - y[n:2 * n])
        dy[:n] = p + gamma * lead
        dy[n:] = lead
    elif kind == PREDICTIVE_RD:
        m = A.shape[0]
        dy[:n] = p
        for i in range(n):
            base = n + i * m
            for a in range(m):
                acc = B[a] * p[i]
                for b in range(m):
                    acc += A[a, b] * y[base + b]
                dy[base + a] = acc
    elif kind == PREDICTIVE_EXRD:
        dy[:n] = lam * (p - y[:n])
        dy[n:] = lam * (p - y[n:])
    return dy


@njit
def score_k(kind, n, A, B, C, y, p):
    """Score ``z`` fed to softmax (strategy-state kinds return the strategy)."""
    if kind == PREDICTIVE_RD:
        m = A.shape[0]
        z = y[:n].copy()
        for i in range(n):
            base = n + i * m
            for a in range(m):
                z[i] += C[a] * y[base + a]
        return z
    if kind == PREDICTIVE_EXRD:
        return y[:n] + y[n:]
    if kind == ORACLE_RD:
        return y[:n] + p
    return y[:n].copy()


@njit
def output_k(kind, n, A, B, C, y, p):
    if kind == BNN or kind == SMITH or kind == TP:
        return y[:n].copy()
    return softmax_k(score_k(kind, n, A, B, C, y, p))


@njit
def rk4_step_k(kind, n, lam, gamma, A, B, C, y, p0, pm, p1, h):
    k1 = field_k(kind, n, lam, gamma, A, B, C, y, p0)
    k2 = field_k(kind, n, lam, gamma, A, B, C, y + 0.5 * h * k1, pm)
    k3 = field_k(kind, n, lam, gamma, A, B, C, y + 0.5 * h * k2, pm)
    k4 = field_k(kind, n, lam, gamma, A, B, C, y + h * k3, p1)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@njit
def integrate_k(kind, n, lam, gamma, A, B, C, y0, nsteps, h,
                sig_kind, offset, amps, omegas, phases, waves, samp_t, samp_p):
    """Fixed-step RK4 over ``t_k = k h``, ``k = 0..nsteps``.

    Returns states, strategies, payoffs on the grid and the index of the first
    non-finite step (``-1`` if none). On divergence the arrays are filled up
    to the last finite step.
    """
    d = y0.shape[0]
    states = np.empty((nsteps + 1, d))
    strategies = np.empty((nsteps + 1, n))
    payoffs = np.empty((nsteps + 1, n))
    y = y0.copy()
    p0 = payoff_k(0.0, sig_kind, offset, amps, omegas, phases, waves, samp_t, samp_p)
    states[0] = y
    payoffs[0] = p0
    strategies[0] = output_k(kind, n, A, B, C, y, p0)
    for k in range(nsteps):
        t = k * h
        pm = payoff_k(t + 0.5 * h, sig_kind, offset, amps, omegas, phases, waves, samp_t, samp_p)
        p1 = payoff_k((k + 1) * h, sig_kind, offset, amps, omegas, phases, waves, samp_t, samp_p)
        y = rk4_step_k(kind, n, lam, gamma, A, B, C, y, p0, pm, p1, h)
        if not np.all(np.isfinite(y)):
            return states, strategies, payoffs, k + 1
        states[k + 1] = y
        payoffs[k + 1] = p1
        strategies[k + 1] = output_k(kind, n, A, B, C, y, p1)
        p0 = p1
    return states, strategies, payoffs, -1
