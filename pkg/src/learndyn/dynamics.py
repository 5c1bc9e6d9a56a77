"""Continuous-time learning rules as ODE-with-output models.

Each :class:`DynamicsModel` carries a flat state vector whose layout depends
on ``kind`` (see :func:`state_layout`). :func:`vector_field` gives the state
derivative for a payoff ``p`` and :func:`output` maps the state to a mixed
strategy on the simplex.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels as K
from .errors import ConfigurationError, DomainError, StructureError
from .lti import StateSpaceSiso, lowpass_predictor
from .simplex import is_simplex


class Kind(str, Enum):
    RD = "rd"
    BNN = "bnn"
    SMITH = "smith"
    TP = "tp"
    EXRD = "exrd"
    ANTICIPATORY = "anticipatory"
    PREDICTIVE_RD = "predictive_rd"
    ORACLE_RD = "oracle_rd"
    PREDICTIVE_EXRD = "predictive_exrd"


KIND_CODES = {
    Kind.RD: K.RD,
    Kind.EXRD: K.EXRD,
    Kind.BNN: K.BNN,
    Kind.SMITH: K.SMITH,
    Kind.TP: K.TP,
    Kind.ANTICIPATORY: K.ANTICIPATORY,
    Kind.PREDICTIVE_RD: K.PREDICTIVE_RD,
    Kind.ORACLE_RD: K.ORACLE_RD,
    Kind.PREDICTIVE_EXRD: K.PREDICTIVE_EXRD,
}

STRATEGY_STATE_KINDS = frozenset({Kind.BNN, Kind.SMITH, Kind.TP})

# Whether the output map reads the instantaneous payoff (not implementable causally).
NON_CAUSAL_KINDS = frozenset({Kind.ORACLE_RD})

_EMPTY_A = np.zeros((0, 0))
_EMPTY_V = np.zeros(0)


@dataclass(frozen=True, eq=False)
class DynamicsModel:
    """A learning rule on ``n`` actions.

    ``lam`` and ``gamma`` are used by exrd / predictive_exrd (``lam``) and by
    anticipatory RD (both). ``predictor`` is the state-space ``h(s)`` of
    predictive RD; it defaults to the low-pass ``gamma*lam/(s+lam)``.
    ``initial_state`` overrides :func:`default_state`.
    """

    kind: Kind
    n: int
    lam: float = 1.0
    gamma: float = 1.0
    predictor: StateSpaceSiso = None
    initial_state: np.ndarray = None
    name: str = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        try:
            kind = Kind(self.kind)
        except ValueError:
            raise ConfigurationError(f"unknown dynamics kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        if int(self.n) < 1:
            raise DomainError("need at least one action")
        object.__setattr__(self, "n", int(self.n))
        if not (self.lam > 0 and self.gamma > 0):
            raise DomainError(f"lam and gamma must be positive (got {self.lam}, {self.gamma})")
        if kind is Kind.PREDICTIVE_RD:
            pred = self.predictor or lowpass_predictor(self.gamma, self.lam)
            if not pred.is_stable():
                raise DomainError("predictor must be asymptotically stable")
            object.__setattr__(self, "predictor", pred)
        if self.name is None:
            object.__setattr__(self, "name", kind.value)
        if kind in NON_CAUSAL_KINDS:
            self.meta.setdefault("causal", False)
        if self.initial_state is not None:
            state = check_state(self, self.initial_state)
            object.__setattr__(self, "initial_state", state)

    @property
    def code(self):
        return KIND_CODES[self.kind]

    @property
    def predictor_order(self):
        return self.predictor.order if self.kind is Kind.PREDICTIVE_RD else 0

    @property
    def state_size(self):
        return sum(stop - start for start, stop in state_layout(self).values())

    def kernel_predictor(self):
        if self.kind is Kind.PREDICTIVE_RD:
            return self.predictor.A, self.predictor.B, self.predictor.C
        return _EMPTY_A, _EMPTY_V, _EMPTY_V

    def start_state(self):
        return self.initial_state.copy() if self.initial_state is not None else default_state(self)

    def with_state(self, state):
        return DynamicsModel(self.kind, self.n, self.lam, self.gamma,
                             self.predictor if self.kind is Kind.PREDICTIVE_RD else None,
                             state, self.name, dict(self.meta))


def state_layout(model):
    """Named ``(start, stop)`` slices of the flat state vector."""
    n = model.n
    kind = model.kind
    if kind in (Kind.RD, Kind.EXRD):
        return {"z": (0, n)}
    if kind is Kind.ORACLE_RD:
        return {"r": (0, n)}
    if kind in STRATEGY_STATE_KINDS:
        return {"x": (0, n)}
    if kind is Kind.ANTICIPATORY:
        return {"z": (0, n), "q": (n, 2 * n)}
    if kind is Kind.PREDICTIVE_EXRD:
        return {"r": (0, n), "m": (n, 2 * n)}
    m = model.predictor.order
    return {"r": (0, n), "x_h": (n, n + n * m)}


def split_state(model, state):
    state = check_state(model, state)
    parts = {k: state[a:b] for k, (a, b) in state_layout(model).items()}
    if "x_h" in parts:
        parts["x_h"] = parts["x_h"].reshape(model.n, model.predictor.order)
    return parts


def check_state(model, state, simplex_tol=1e-9):
    state = np.asarray(state, dtype=float).reshape(-1)
    if state.size != model.state_size:
        raise StructureError(
            f"{model.kind.value} on n={model.n} expects {model.state_size} state entries, got {state.size}"
        )
    if model.kind in STRATEGY_STATE_KINDS and not is_simplex(state, simplex_tol):
        raise StructureError(f"{model.kind.value} state must lie on the simplex")
    return state


def default_state(model):
    """Zero scores and predictor states; uniform strategy for strategy-state kinds."""
    if model.kind in STRATEGY_STATE_KINDS:
        return np.full(model.n, 1.0 / model.n)
    return np.zeros(model.state_size)


def _payoff(model, p):
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size != model.n or not np.all(np.isfinite(p)):
        raise StructureError(f"payoff must be a finite vector of length {model.n}")
    return p


def vector_field(model, state, p):
    """State derivative of ``model`` at ``state`` under payoff ``p``."""
    state = check_state(model, state)
    p = _payoff(model, p)
    A, B, C = model.kernel_predictor()
    return K.field_k(model.code, model.n, float(model.lam), float(model.gamma), A, B, C, state, p)


def score(model, state, p=None):
    """The score fed to softmax; ``None`` for strategy-state kinds."""
    if model.kind in STRATEGY_STATE_KINDS:
        return None
    state = check_state(model, state)
    if model.kind is Kind.ORACLE_RD and p is None:
        raise StructureError("oracle_rd score needs the instantaneous payoff")
    p = np.zeros(model.n) if p is None else _payoff(model, p)
    A, B, C = model.kernel_predictor()
    return K.score_k(model.code, model.n, A, B, C, state, p)


def output(model, state, p=None):
    """Mixed strategy produced by ``model`` in ``state``.

    ``p`` is only read by oracle RD, whose score is ``r + p``.
    """
    state = check_state(model, state)
    if model.kind is Kind.ORACLE_RD and p is None:
        raise StructureError("oracle_rd output needs the instantaneous payoff")
    p = np.zeros(model.n) if p is None else _payoff(model, p)
    A, B, C = model.kernel_predictor()
    return K.output_k(model.code, model.n, A, B, C, state, p)


# Pairs with a dominance statement and the initial conditions it assumes.
_MATCHED_PAIRS = {
    frozenset({Kind.RD, Kind.ORACLE_RD}),
    frozenset({Kind.EXRD, Kind.PREDICTIVE_EXRD}),
    frozenset({Kind.RD, Kind.ANTICIPATORY}),
    frozenset({Kind.RD, Kind.PREDICTIVE_RD}),
    frozenset({Kind.ANTICIPATORY, Kind.PREDICTIVE_RD}),
}


def is_matched_pair(kind_a, kind_b):
    return frozenset({Kind(kind_a), Kind(kind_b)}) in _MATCHED_PAIRS


def matched_initialization(kind_a, kind_b, n, alpha=0.0, predictor_order=1):
    """Initial states satisfying the matching hypothesis for a dominance pair.

    Scores start at ``alpha * 1`` (``alpha = 0`` by default) and every
    predictor, filter or lead state starts at zero, so ``m(0) = gamma q(0) = 0``.
    For predictive Ex-RD both ``r`` and ``m`` start at ``alpha * 1``.
    """
    kind_a, kind_b = Kind(kind_a), Kind(kind_b)
    if frozenset({kind_a, kind_b}) not in _MATCHED_PAIRS:
        raise ConfigurationError(f"no dominance pair ({kind_a.value}, {kind_b.value})")

    def one(kind):
        ones = np.full(n, float(alpha))
        if kind in (Kind.RD, Kind.EXRD, Kind.ORACLE_RD):
            return ones
        if kind is Kind.PREDICTIVE_EXRD:
            return np.concatenate([ones, ones])
        if kind is Kind.ANTICIPATORY:
            return np.concatenate([ones, np.zeros(n)])
        return np.concatenate([ones, np.zeros(n * predictor_order)])

    return one(kind_a), one(kind_b)
