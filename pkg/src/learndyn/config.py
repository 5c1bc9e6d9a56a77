"""Experiment configuration files (JSON, ``schema_version`` 1).

Example::

    {
      "schema_version": 1,
      "T": 1000, "h": 0.01,
      "models": [{"kind": "rd"}, {"kind": "bnn", "name": "BNN"}],
      "signal": {"preset": "example1"},
      "outputs": ["trajectory", "regret", "svg"]
    }

A signal is either ``{"preset": "example1" | "example2" | "example3"}``,
``{"type": "analytic", "offset": [...], "terms": [{"amplitude": [...],
"omega": w, "phase": 0, "waveform": "sin"}]}`` or ``{"type": "sampled",
"times": [...], "values": [[...], ...]}``.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import DynamicsModel, Kind
from .errors import ConfigurationError, LearnDynError
from .freq import DEFAULT_NODES, MIN_NODES, SinusoidEnv
from .lti import RationalTf, StateSpaceSiso
from .signals import (AnalyticSignal, SampledSignal, SinusoidTerm, example1_signal,
                      example2_signal, example3_signal)
from .sim import DEFAULT_HORIZON, DEFAULT_STEP

SCHEMA_VERSION = 1
OUTPUT_KINDS = ("trajectory", "gaps", "regret", "svg", "freq")
SIGNAL_PRESETS = {"example1": example1_signal, "example2": example2_signal, "example3": example3_signal}


@dataclass
class FreqSpec:
    env: SinusoidEnv
    phi: np.ndarray
    a: np.ndarray
    N: int = DEFAULT_NODES
    filters: list = field(default_factory=list)  # (name, RationalTf)


@dataclass
class ScenarioConfig:
    models: list
    signal: object
    T: float = DEFAULT_HORIZON
    h: float = DEFAULT_STEP
    outputs: tuple = ("trajectory", "regret", "svg")
    seed: int = 0
    csv_stride: int = 1
    matched: bool = False
    freq: FreqSpec = None


def _require(cond, message, path):
    if not cond:
        raise ConfigurationError(message, path)


def _vector(value, path, length=None):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigurationError("expected a list of numbers", path) from None
    _require(arr.ndim == 1 and arr.size > 0, "expected a non-empty list of numbers", path)
    _require(np.all(np.isfinite(arr)), "entries must be finite", path)
    if length is not None:
        _require(arr.size == length, f"expected {length} entries, got {arr.size}", path)
    return arr


def _number(value, path, positive=False):
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), "expected a number", path)
    _require(np.isfinite(value), "must be finite", path)
    if positive:
        _require(value > 0, "must be positive", path)
    return float(value)


def parse_signal(spec, path="signal"):
    _require(isinstance(spec, dict), "expected an object", path)
    if "preset" in spec:
        preset = spec["preset"]
        _require(preset in SIGNAL_PRESETS, f"unknown preset {preset!r}", f"{path}.preset")
        return SIGNAL_PRESETS[preset]()
    kind = spec.get("type")
    try:
        if kind == "analytic":
            offset = _vector(spec.get("offset"), f"{path}.offset")
            terms = []
            for i, term in enumerate(spec.get("terms", [])):
                tp = f"{path}.terms[{i}]"
                _require(isinstance(term, dict), "expected an object", tp)
                amp = _vector(term.get("amplitude"), f"{tp}.amplitude", offset.size)
                omega = _number(term.get("omega"), f"{tp}.omega")
                _require(omega >= 0, "must be >= 0", f"{tp}.omega")
                phase = _number(term.get("phase", 0.0), f"{tp}.phase")
                wave = term.get("waveform", "sin")
                _require(wave in ("sin", "cos"), "must be 'sin' or 'cos'", f"{tp}.waveform")
                terms.append(SinusoidTerm(amp, omega, phase, wave))
            return AnalyticSignal(offset, terms)
        if kind == "sampled":
            times = _vector(spec.get("times"), f"{path}.times")
            values = np.asarray(spec.get("values"), dtype=float)
            return SampledSignal(times, values)
    except ConfigurationError:
        raise
    except (LearnDynError, TypeError, ValueError) as exc:
        raise ConfigurationError(str(exc), path) from None
    raise ConfigurationError("type must be 'analytic' or 'sampled' (or give a preset)", f"{path}.type")


def parse_model(spec, n, path):
    _require(isinstance(spec, dict), "expected an object", path)
    kind = spec.get("kind")
    _require(kind in {k.value for k in Kind}, f"unknown kind {kind!r}", f"{path}.kind")
    kwargs = {"kind": kind, "n": n, "name": spec.get("name")}
    for key in ("lam", "gamma"):
        if key in spec:
            kwargs[key] = _number(spec[key], f"{path}.{key}", positive=True)
    if "predictor" in spec:
        pred = spec["predictor"]
        _require(isinstance(pred, dict) and {"A", "B", "C"} <= set(pred),
                 "predictor needs A, B and C", f"{path}.predictor")
        try:
            kwargs["predictor"] = StateSpaceSiso(pred["A"], pred["B"], pred["C"])
        except (LearnDynError, TypeError, ValueError) as exc:
            raise ConfigurationError(str(exc), f"{path}.predictor") from None
    if "initial_state" in spec:
        kwargs["initial_state"] = _vector(spec["initial_state"], f"{path}.initial_state")
    try:
        return DynamicsModel(**kwargs)
    except (LearnDynError, TypeError, ValueError) as exc:
        raise ConfigurationError(str(exc), path) from None


def _grid(spec, path, log=False):
    if isinstance(spec, dict):
        _require({"start", "stop", "num"} <= set(spec), "grid needs start, stop, num", path)
        start = _number(spec["start"], f"{path}.start")
        stop = _number(spec["stop"], f"{path}.stop")
        num = spec["num"]
        _require(isinstance(num, int) and num >= 1, "num must be a positive integer", f"{path}.num")
        if spec.get("log", log):
            _require(start > 0 and stop > 0, "log grid bounds must be positive", path)
            return np.logspace(np.log10(start), np.log10(stop), num)
        return np.linspace(start, stop, num)
    return _vector(spec, path)


def parse_freq(spec, path="freq"):
    _require(isinstance(spec, dict), "expected an object", path)
    pbar = _vector(spec.get("pbar"), f"{path}.pbar")
    qbar = _vector(spec.get("qbar", np.zeros(pbar.size).tolist()), f"{path}.qbar", pbar.size)
    omega = _number(spec.get("omega", 1.0), f"{path}.omega", positive=True)
    try:
        env = SinusoidEnv(pbar, qbar, omega)
    except LearnDynError as exc:
        raise ConfigurationError(str(exc), path) from None
    phi = _grid(spec.get("phi", {"start": -np.pi / 2, "stop": np.pi / 2, "num": 181}), f"{path}.phi")
    _require(np.all(np.abs(phi) <= np.pi / 2 + 1e-12), "phase lags must lie in [-pi/2, pi/2]", f"{path}.phi")
    a = _grid(spec.get("a", {"start": 0.1, "stop": 10.0, "num": 9, "log": True}), f"{path}.a", log=True)
    _require(np.all(a > 0), "gains must be positive", f"{path}.a")
    N = spec.get("N", DEFAULT_NODES)
    _require(isinstance(N, int) and N >= MIN_NODES, f"N must be an integer >= {MIN_NODES}", f"{path}.N")
    filters = []
    for i, f in enumerate(spec.get("filters", [])):
        fp = f"{path}.filters[{i}]"
        _require(isinstance(f, dict) and "num" in f and "den" in f, "filter needs num and den", fp)
        try:
            filters.append((f.get("name", f"g{i + 1}"), RationalTf(f["num"], f["den"])))
        except (LearnDynError, TypeError, ValueError) as exc:
            raise ConfigurationError(str(exc), fp) from None
    return FreqSpec(env, phi, a, N, filters)


def parse_config(doc, require_models=True):
    """Validate a decoded JSON document and build a :class:`ScenarioConfig`."""
    _require(isinstance(doc, dict), "configuration must be a JSON object", "$")
    version = doc.get("schema_version", SCHEMA_VERSION)
    _require(version == SCHEMA_VERSION, f"unsupported schema_version {version!r}", "schema_version")

    freq = parse_freq(doc["freq"]) if "freq" in doc else None
    T = _number(doc.get("T", DEFAULT_HORIZON), "T", positive=True)
    h = _number(doc.get("h", DEFAULT_STEP), "h", positive=True)
    _require(h <= T, "step must not exceed the horizon", "h")

    outputs = doc.get("outputs", ["trajectory", "regret", "svg"])
    _require(isinstance(outputs, list), "expected a list", "outputs")
    for i, o in enumerate(outputs):
        _require(o in OUTPUT_KINDS, f"unknown output {o!r}", f"outputs[{i}]")

    seed = doc.get("seed", 0)
    _require(isinstance(seed, int) and seed >= 0, "seed must be a non-negative integer", "seed")
    stride = doc.get("csv_stride", 1)
    _require(isinstance(stride, int) and stride >= 1, "csv_stride must be a positive integer", "csv_stride")

    models_spec = doc.get("models", [])
    _require(isinstance(models_spec, list), "expected a list", "models")
    if not require_models and not models_spec:
        return ScenarioConfig([], None, T, h, tuple(outputs), seed, stride, False, freq)
    _require(len(models_spec) > 0, "at least one model is required", "models")
    _require("signal" in doc, "missing signal", "signal")
    signal = parse_signal(doc["signal"])
    models = [parse_model(m, signal.n, f"models[{i}]") for i, m in enumerate(models_spec)]
    names = [m.name for m in models]
    _require(len(set(names)) == len(names), "model names must be unique", "models")
    matched = doc.get("matched_init", False)
    _require(isinstance(matched, bool), "expected true or false", "matched_init")
    return ScenarioConfig(models, signal, T, h, tuple(outputs), seed, stride, matched, freq)


def load_config(path, require_models=True):
    try:
        with open(Path(path), encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config: {exc.strerror}", str(path)) from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON ({exc.msg}, line {exc.lineno})", str(path)) from None
    return parse_config(doc, require_models)
