"""Payoff signals ``p(t)``.

An :class:`AnalyticSignal` is a constant offset plus a finite sum of
sinusoids; a :class:`SampledSignal` linearly interpolates tabulated values
(held constant outside the table).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, StructureError

SIN, COS = 0, 1
_WAVE_CODES = {"sin": SIN, "cos": COS}

ANALYTIC, SAMPLED = 0, 1


@dataclass(frozen=True, eq=False)
class SinusoidTerm:
    """``amplitude * sin(omega t + phase)`` (or ``cos``)."""

    amplitude: np.ndarray
    omega: float
    phase: float = 0.0
    waveform: str = "sin"

    def __post_init__(self):
        object.__setattr__(self, "amplitude", np.asarray(self.amplitude, dtype=float).reshape(-1))
        if self.waveform not in _WAVE_CODES:
            raise DomainError(f"waveform must be 'sin' or 'cos', got {self.waveform!r}")
        if not self.omega >= 0:
            raise DomainError(f"angular frequency must be >= 0, got {self.omega}")


@dataclass(frozen=True, eq=False)
class AnalyticSignal:
    offset: np.ndarray
    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        offset = np.asarray(self.offset, dtype=float).reshape(-1)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "terms", tuple(self.terms))
        for term in self.terms:
            if term.amplitude.shape != offset.shape:
                raise StructureError(
                    f"term amplitude has {term.amplitude.size} channels, offset has {offset.size}"
                )

    @property
    def n(self):
        return self.offset.size

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.broadcast_to(self.offset, t.shape + (self.n,)).copy()
        for term in self.terms:
            arg = term.omega * t + term.phase
            wave = np.sin(arg) if term.waveform == "sin" else np.cos(arg)
            out += wave[..., None] * term.amplitude
        return out

    def kernel_args(self):
        k = len(self.terms)
        amps = np.zeros((k, self.n))
        omegas = np.zeros(k)
        phases = np.zeros(k)
        waves = np.zeros(k, dtype=np.int64)
        for i, term in enumerate(self.terms):
            amps[i] = term.amplitude
            omegas[i] = term.omega
            phases[i] = term.phase
            waves[i] = _WAVE_CODES[term.waveform]
        return (ANALYTIC, self.offset, amps, omegas, phases, waves,
                np.zeros(1), np.zeros((1, self.n)))

    def scaled(self, factor):
        terms = [SinusoidTerm(t.amplitude * factor, t.omega, t.phase, t.waveform) for t in self.terms]
        return AnalyticSignal(self.offset * factor, terms)


@dataclass(frozen=True, eq=False)
class SampledSignal:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if times.size < 2 or values.shape[0] != times.size:
            raise StructureError("need at least two samples and one payoff row per sample")
        if np.any(np.diff(times) <= 0):
            raise DomainError("sample times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def n(self):
        return self.values.shape[1]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        cols = [np.interp(t, self.times, self.values[:, i]) for i in range(self.n)]
        return np.stack(cols, axis=-1)

    def kernel_args(self):
        empty = np.zeros(0)
        return (SAMPLED, np.zeros(self.n), np.zeros((0, self.n)), empty, empty,
                np.zeros(0, dtype=np.int64), self.times, self.values)


def constant_signal(pbar):
    return AnalyticSignal(pbar)


def sinusoid_signal(pbar, qbar, omega, offset=None):
    """``offset + pbar sin(omega t) + qbar cos(omega t)``."""
    pbar = np.asarray(pbar, dtype=float)
    qbar = np.asarray(qbar, dtype=float)
    offset = np.zeros_like(pbar) if offset is None else offset
    return AnalyticSignal(offset, [SinusoidTerm(pbar, omega, 0.0, "sin"),
                                   SinusoidTerm(qbar, omega, 0.0, "cos")])


def example1_signal():
    """``[sin t, 0.5]``: finite-regret RD does best."""
    return AnalyticSignal([0.0, 0.5], [SinusoidTerm([1.0, 0.0], 1.0)])


def example2_signal():
    """``[sin t, -sin t]``: RD averages zero, the others do better."""
    return AnalyticSignal([0.0, 0.0], [SinusoidTerm([1.0, -1.0], 1.0)])


EXAMPLE3_V1 = (0.3, 0.5, -0.7, 1.0, 0.8)
EXAMPLE3_V2 = (0.7, 2.0, 0.4, 1.2, 2.0)
EXAMPLE3_V3 = (0.8, 1.4, -2.1, 2.0, 0.8)


def example3_signal():
    """``v1 sin t + v2 cos 2t + v3 sin 3t`` on five actions."""
    return AnalyticSignal(np.zeros(5), [
        SinusoidTerm(EXAMPLE3_V1, 1.0, 0.0, "sin"),
        SinusoidTerm(EXAMPLE3_V2, 2.0, 0.0, "cos"),
        SinusoidTerm(EXAMPLE3_V3, 3.0, 0.0, "sin"),
    ])


def random_analytic_signal(rng, n, max_terms=3, amp=2.0, omega_range=(0.1, 5.0), offset=True):
    """Random multi-sine payoff used by the randomized dominance suites."""
    k = int(rng.integers(1, max_terms + 1))
    terms = [
        SinusoidTerm(rng.uniform(-amp, amp, n), float(rng.uniform(*omega_range)),
                     float(rng.uniform(0, 2 * np.pi)), "sin" if rng.random() < 0.5 else "cos")
        for _ in range(k)
    ]
    off = rng.uniform(-amp, amp, n) if offset else np.zeros(n)
    return AnalyticSignal(off, terms)
