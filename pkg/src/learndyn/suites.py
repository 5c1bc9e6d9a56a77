"""Randomized invariant suites with reproducible per-trial seeds.

Trial ``k`` of a suite run with seed ``s`` draws from
``np.random.default_rng([s, k])``, so any single trial can be replayed.
Each suite reports its worst margin: the smallest slack between a checked
quantity and its bound. A negative margin means a violation.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DynamicsModel, Kind
from .errors import ConfigurationError
from .freq import FIG6_ENV, SinusoidEnv, avg_reward_J, model_J, sweep_phi_a, t2_integral
from .lti import RationalTf, lowpass_predictor, ss_time_response, tf_to_ss
from .metrics import dissipation_residual_exrd, reward_gap, simulate_pair
from .signals import AnalyticSignal, SinusoidTerm, example3_signal, random_analytic_signal
from .simplex import lemma1_form, project_simplex, softmax, softmax_jacobian

DOMINANCE_RTOL = 1e-6
SUITE_HORIZON = 20.0
SUITE_STEP = 1e-2
SUITE_SIZES = (2, 3, 5)


@dataclass
class SuiteReport:
    name: str
    seed: int
    trials: int
    passed: bool
    worst_margin: float
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name} seed={self.seed} trials={self.trials} "
                f"worst_margin={self.worst_margin:.3e} ({self.elapsed:.1f}s)")


def trial_rng(seed, trial):
    return np.random.default_rng([int(seed), int(trial)])


def _random_vector(rng, n=None, scale=5.0):
    n = int(rng.integers(2, 7)) if n is None else n
    return rng.normal(0.0, scale * rng.random() + 1e-3, n)


def _tangent_basis(n):
    """Orthonormal basis of ``{v : sum(v) = 0}`` as an ``n x (n-1)`` matrix."""
    _, _, vt = np.linalg.svd(np.ones((1, n)))
    return vt[1:].T


# ---------------------------------------------------------------- softmax


def _lemma1(seed, trials):
    worst = np.inf
    for k in range(trials):
        v = _random_vector(trial_rng(seed, k))
        worst = min(worst, lemma1_form(v) + 1e-12)
    return worst, {}


def _lemma2(seed, trials):
    worst = np.inf
    for k in range(trials):
        rng = trial_rng(seed, k)
        n = int(rng.integers(2, 7))
        u, v = _random_vector(rng, n), _random_vector(rng, n)
        lhs = np.linalg.norm(softmax(u + v) - softmax(u))
        rhs = 0.5 * np.linalg.norm(v)
        worst = min(worst, rhs - lhs + 1e-15)
    return worst, {}


def _jacobian(seed, trials, step=1e-6, tol=1e-8):
    worst = np.inf
    for k in range(trials):
        v = _random_vector(trial_rng(seed, k), scale=2.0)
        n = v.size
        fd = np.empty((n, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = step
            fd[:, j] = (softmax(v + e) - softmax(v - e)) / (2 * step)
        worst = min(worst, tol - np.max(np.abs(fd - softmax_jacobian(v))))
    return worst, {}


def _simplex_grid(res):
    m = int(round(1.0 / res))
    i, j = np.meshgrid(np.arange(m + 1), np.arange(m + 1), indexing="ij")
    keep = i + j <= m
    i, j = i[keep], j[keep]
    return np.column_stack([i, j, m - i - j]) / m


def _projection(seed, trials, res=1e-3, tol=2e-3):
    grid = _simplex_grid(res)
    worst = np.inf
    for k in range(trials):
        v = trial_rng(seed, k).normal(0.0, 1.0, 3)
        best = grid[np.argmin(np.sum((grid - v) ** 2, axis=1))]
        worst = min(worst, tol - np.max(np.abs(project_simplex(v) - best)))
    return worst, {}


# ---------------------------------------------------------------- dominance


def _random_signal(rng):
    n = int(rng.choice(SUITE_SIZES))
    return random_analytic_signal(rng, n)


def _dominance(kind_a, kind_b, seed, trials, T=SUITE_HORIZON, h=SUITE_STEP, **model_kw):
    worst, worst_trial = np.inf, -1
    for k in range(trials):
        sig = _random_signal(trial_rng(seed, k))
        a = DynamicsModel(kind_a, sig.n, **model_kw)
        b = DynamicsModel(kind_b, sig.n, **model_kw)
        ta, tb = simulate_pair(a, b, sig, T, h)
        margin = reward_gap(ta, tb, rtol=DOMINANCE_RTOL).worst_margin
        if margin < worst:
            worst, worst_trial = margin, k
    return worst, {"worst_trial": worst_trial}


def _oracle_dominance(seed, trials):
    return _dominance(Kind.ORACLE_RD, Kind.RD, seed, trials)


def _exrd_dominance(seed, trials, strict_T=10.0, identity_tol=1e-6, dissipation_tol=1e-6):
    worst, details = _dominance(Kind.PREDICTIVE_EXRD, Kind.EXRD, seed, trials, lam=1.0)
    ident = strict = diss = np.inf
    for k in range(trials):
        sig = _random_signal(trial_rng(seed, k))
        pe = DynamicsModel(Kind.PREDICTIVE_EXRD, sig.n, lam=1.0)
        ex = DynamicsModel(Kind.EXRD, sig.n, lam=1.0)
        ta, tb = simulate_pair(pe, ex, sig, strict_T, SUITE_STEP)
        n = sig.n
        z_pe = ta.states[:, :n] + ta.states[:, n:]
        ident = min(ident, identity_tol - np.max(np.abs(z_pe - 2.0 * tb.states)))
        strict = min(strict, ta.cum_reward[-1] - tb.cum_reward[-1])
        if k < max(1, trials // 10):
            for s in (0.0, 0.5, 1.0):
                diss = min(diss, dissipation_tol - dissipation_residual_exrd(sig, SUITE_HORIZON, SUITE_STEP, s))
    details.update(identity_margin=ident, strict_gap_min=strict, dissipation_margin=diss)
    return min(worst, ident, diss, strict), details


def _anticipatory_constant(seed, trials, T=10.0):
    worst = np.inf
    strict_min = np.inf
    flat_max = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        n = int(rng.choice(SUITE_SIZES))
        pbar = rng.uniform(-2, 2, n) if k else np.array([1.0, 0.0])
        c = float(rng.uniform(-2, 2))
        for vec, flat in ((pbar, False), (np.full(n, c), True)):
            sig = AnalyticSignal(vec)
            ta, tb = simulate_pair(DynamicsModel(Kind.ANTICIPATORY, vec.size),
                                   DynamicsModel(Kind.RD, vec.size), sig, T, SUITE_STEP)
            gap = ta.cum_reward[-1] - tb.cum_reward[-1]
            tol = DOMINANCE_RTOL * (1 + abs(ta.cum_reward[-1]))
            if flat:
                flat_max = max(flat_max, abs(gap))
                worst = min(worst, tol - abs(gap))
            else:
                strict_min = min(strict_min, gap)
                worst = min(worst, gap)
    return worst, {"strict_gap_min": strict_min, "span_gap_max": flat_max}


def _signal_from_params(theta, n, omegas):
    """Offset plus one sine and one cosine per frequency; ``theta`` holds all amplitudes."""
    k = len(omegas)
    theta = np.asarray(theta).reshape(1 + 2 * k, n)
    terms = []
    for i, w in enumerate(omegas):
        terms.append(SinusoidTerm(theta[1 + 2 * i], w, 0.0, "sin"))
        terms.append(SinusoidTerm(theta[2 + 2 * i], w, 0.0, "cos"))
    return AnalyticSignal(theta[0], terms)


def _relative_min_gap(sig, T, h):
    ta, tb = simulate_pair(DynamicsModel(Kind.ANTICIPATORY, sig.n), DynamicsModel(Kind.RD, sig.n), sig, T, h)
    gap = ta.cum_reward - tb.cum_reward
    tol = DOMINANCE_RTOL * (1 + np.abs(ta.cum_reward))
    return float(np.min((gap + tol)[1:]))


def falsification_search(seed, iterations=500, restarts=10, T=10.0, h=SUITE_STEP, amp=2.0):
    """Random-restart coordinate search for a payoff with anticipatory RD behind RD.

    Minimizes ``min_{t>0} [gap(t) + tol(t)]`` over sinusoid amplitudes. Returns
    the smallest value found and the number of objective evaluations.
    """
    rng = np.random.default_rng([int(seed), 0xFA15])
    per_restart = max(1, iterations // restarts)
    best = np.inf
    evals = 0
    while evals < iterations:
        n = int(rng.choice(SUITE_SIZES))
        omegas = tuple(rng.uniform(0.1, 5.0, int(rng.integers(1, 4))))
        theta = rng.uniform(-amp, amp, (1 + 2 * len(omegas)) * n)
        cur = _relative_min_gap(_signal_from_params(theta, n, omegas), T, h)
        evals += 1
        step = 0.5 * amp
        for _ in range(per_restart - 1):
            if evals >= iterations:
                break
            trial = theta.copy()
            i = int(rng.integers(theta.size))
            trial[i] = np.clip(trial[i] + rng.normal(0.0, step), -amp, amp)
            val = _relative_min_gap(_signal_from_params(trial, n, omegas), T, h)
            evals += 1
            if val < cur:
                theta, cur = trial, val
            else:
                step = max(0.95 * step, 1e-3)
        best = min(best, cur)
    return best, evals


def _anticipatory_global(seed, trials, search_iters=500, example_T=20.0):
    worst, details = _dominance(Kind.ANTICIPATORY, Kind.RD, seed, trials)
    sig = example3_signal()
    ta, tb = simulate_pair(DynamicsModel(Kind.ANTICIPATORY, 5), DynamicsModel(Kind.RD, 5), sig,
                           example_T, SUITE_STEP)
    rep = reward_gap(ta, tb, rtol=DOMINANCE_RTOL)
    details["example3_margin"] = rep.worst_margin
    details["example3_strict"] = bool(np.all(rep.gap[1:] > 0))
    details["example3_min_gap_t_pos"] = float(np.min(rep.gap[1:]))
    search_min = np.inf
    if search_iters:
        search_min, evals = falsification_search(seed, search_iters)
        details["search_min_margin"] = search_min
        details["search_evaluations"] = evals
    margin = min(worst, rep.worst_margin, search_min)
    if not details["example3_strict"]:
        margin = min(margin, details["example3_min_gap_t_pos"])
    return margin, details


# ---------------------------------------------------------------- frequency


PASSIVE_FILTERS = {
    "1/(s+1)": RationalTf([1.0], [1.0, 1.0]),
    "1+1/s": RationalTf([1.0, 1.0], [1.0, 0.0]),
    "(s+1)/(s+2)": RationalTf([1.0, 1.0], [1.0, 2.0]),
    "gl/(s+l)": RationalTf([1.0], [1.0, 1.0]),
}


def _random_env(rng):
    n = int(rng.choice(SUITE_SIZES))
    return SinusoidEnv(rng.uniform(-2, 2, n), rng.uniform(-2, 2, n), float(rng.uniform(0.2, 3.0)))


def check_freq_env(env, a_grid=None, N=1024):
    """Margins of the frequency-domain identities on one environment."""
    a_grid = np.logspace(-1, 1, 20) if a_grid is None else a_grid
    phi = np.linspace(-np.pi / 2, np.pi / 2, 21)
    sw = sweep_phi_a(env, phi, a_grid, N)
    quarter = max(abs(avg_reward_J(env, np.pi / 2, a, N)) for a in a_grid)
    t2 = max(abs(t2_integral(env, a, N)) for a in a_grid)
    rows = sw.J[np.cos(phi) > 1e-12]
    mono = float(np.min(np.diff(rows, axis=1))) if rows.size else 0.0
    passive = min(model_J(g, env, N) for g in PASSIVE_FILTERS.values())
    margins = {
        "quarter_period": 1e-10 - quarter,
        "t2": 1e-8 - t2,
        "factorization": 1e-8 - sw.factorization_residual,
        "monotone": mono + 1e-12,
        "passive_vs_rd": passive + 1e-12,
    }
    return margins


def _freq_theory(seed, trials):
    margins = check_freq_env(FIG6_ENV)
    details = {f"fig6_{k}": v for k, v in margins.items()}
    worst = min(margins.values())
    for k in range(trials):
        m = check_freq_env(_random_env(trial_rng(seed, k)), np.logspace(-1, 1, 8), 512)
        worst = min(worst, *m.values())
    return worst, details


# ---------------------------------------------------------------- linearization


def linearization_error(n, direction, predictor, waveform="step", omega=1.0, eps=0.01, T=5.0, h=SUITE_STEP):
    """Relative error between the nonlinear and linearized comparison outputs.

    Drives predictive RD (with ``predictor``) and RD from matched initial
    conditions by ``p = 1 + eps N d u(t)``, where ``N`` spans the tangent
    space and ``u`` is a unit step or ``sin(omega t)``. The output
    ``dy = N^T (x_pred - x_rd) / eps`` is compared to ``d`` times the
    response of ``h(s)/n`` to ``u``.
    """
    N = _tangent_basis(n)
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    dp = eps * (N @ d)
    if waveform == "step":
        sig = AnalyticSignal(np.ones(n) + dp)

        def u(t):
            return 1.0
    elif waveform == "sin":
        sig = AnalyticSignal(np.ones(n), [SinusoidTerm(dp, omega)])

        def u(t):
            return np.sin(omega * t)
    else:
        raise ConfigurationError(f"unknown waveform {waveform!r}")
    pred = DynamicsModel(Kind.PREDICTIVE_RD, n, predictor=predictor)
    ta, tb = simulate_pair(pred, DynamicsModel(Kind.RD, n), sig, T, h)
    dy = (ta.strategies - tb.strategies) @ N / eps
    lin = np.outer(ss_time_response(predictor, u, ta.t) / n, d)
    return float(np.max(np.abs(dy - lin)) / np.max(np.abs(lin)))


LINEARIZATION_PREDICTORS = {
    "lowpass": lowpass_predictor(1.0, 1.0),
    "second_order": tf_to_ss(RationalTf([1.0, 2.0], [1.0, 4.0, 3.0])),
}


def _local_linearization(seed, trials, tol=0.05):
    worst = np.inf
    errs = {}
    for k in range(trials):
        rng = trial_rng(seed, k)
        n = int(rng.choice(SUITE_SIZES))
        d = rng.normal(size=n - 1)
        for pname, pred in LINEARIZATION_PREDICTORS.items():
            cases = [("step", 1.0, 5.0)] + [("sin", w, 20.0) for w in (0.5, 1.0, 3.0)]
            for wave, w, T in cases:
                err = linearization_error(n, d, pred, wave, w, T=T)
                key = f"{pname}_{wave}" + (f"_{w:g}" if wave == "sin" else "")
                errs[key] = max(errs.get(key, 0.0), err)
                worst = min(worst, tol - err)
    return worst, {"max_relative_error": errs}


# ---------------------------------------------------------------- registry


SUITES = {
    "lemma1": (_lemma1, 10000),
    "lemma2": (_lemma2, 10000),
    "jacobian": (_jacobian, 1000),
    "projection": (_projection, 20),
    "oracle_dominance": (_oracle_dominance, 100),
    "exrd_dominance": (_exrd_dominance, 100),
    "anticipatory_constant": (_anticipatory_constant, 20),
    "anticipatory_global": (_anticipatory_global, 200),
    "freq_theory": (_freq_theory, 20),
    "local_linearization": (_local_linearization, 3),
}


def property_suite(name, seed=0, trials=None, **kwargs):
    """Run the named suite and return a :class:`SuiteReport`."""
    if name not in SUITES:
        raise ConfigurationError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn, default_trials = SUITES[name]
    trials = default_trials if trials is None else int(trials)
    if trials < 1:
        raise ConfigurationError("trials must be at least 1")
    start = time.perf_counter()
    margin, details = fn(int(seed), trials, **kwargs)
    elapsed = time.perf_counter() - start
    return SuiteReport(name, int(seed), trials, bool(margin >= 0), float(margin), details, elapsed)
