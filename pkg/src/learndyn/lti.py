"""Single-input single-output LTI systems.

Two views are kept side by side: :class:`RationalTf` (coefficients in
descending powers of ``s``) for frequency-domain work and
:class:`StateSpaceSiso` for simulation. Conversion between them is explicit
and limited to first and second order.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, PoleError, SingularityError, StructureError

POLE_DISTANCE = 1e-9
MARGINAL_BAND = 1e-9


def default_omega_grid(num=400, lo=1e-4, hi=1e4):
    return np.logspace(np.log10(lo), np.log10(hi), num)


@dataclass(frozen=True, eq=False)
class RationalTf:
    """``num(s) / den(s)``; the denominator is normalised to be monic."""

    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        num = np.trim_zeros(np.atleast_1d(np.asarray(self.num, dtype=float)), "f")
        den = np.trim_zeros(np.atleast_1d(np.asarray(self.den, dtype=float)), "f")
        if den.size == 0:
            raise DomainError("denominator is identically zero")
        if num.size == 0:
            num = np.zeros(1)
        lead = den[0]
        object.__setattr__(self, "num", num / lead)
        object.__setattr__(self, "den", den / lead)

    @property
    def poles(self):
        return np.roots(self.den) if self.den.size > 1 else np.zeros(0, dtype=complex)

    def __call__(self, s):
        return np.polyval(self.num, s) / np.polyval(self.den, s)

    def __add__(self, other):
        if not isinstance(other, RationalTf):
            other = RationalTf([float(other)], [1.0])
        num = np.polyadd(np.polymul(self.num, other.den), np.polymul(other.num, self.den))
        return RationalTf(num, np.polymul(self.den, other.den))

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, RationalTf):
            return RationalTf(self.num * float(other), self.den)
        return RationalTf(np.polymul(self.num, other.num), np.polymul(self.den, other.den))

    __rmul__ = __mul__

    def __repr__(self):
        return f"RationalTf(num={self.num.tolist()}, den={self.den.tolist()})"


@dataclass(frozen=True, eq=False)
class StateSpaceSiso:
    """``x' = A x + B u``, ``y = C x`` with ``m`` states."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        B = np.asarray(self.B, dtype=float).reshape(-1)
        C = np.asarray(self.C, dtype=float).reshape(-1)
        m = A.shape[0]
        if A.shape != (m, m) or B.shape != (m,) or C.shape != (m,):
            raise StructureError(
                f"inconsistent dimensions A{A.shape}, B{B.shape}, C{C.shape}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def order(self):
        return self.A.shape[0]

    def is_stable(self):
        return bool(np.all(np.linalg.eigvals(self.A).real < 0))


@dataclass(frozen=True)
class FrequencyPoint:
    """Gain ``a = |g(jw)|`` and phase lag ``phi = -arg g(jw)`` in ``(-pi, pi]``."""

    omega: float
    gain: float
    phase_lag: float


class PassivityVerdict(str, Enum):
    PASSIVE = "passive"
    MARGINAL = "marginal"
    NOT_PASSIVE = "not_passive"


@dataclass(frozen=True)
class PassivityReport:
    verdict: PassivityVerdict
    min_real: float
    omega_at_min: float

    def __bool__(self):
        return self.verdict is not PassivityVerdict.NOT_PASSIVE


def integrator():
    """``1/s``, the score filter of standard replicator dynamics."""
    return RationalTf([1.0], [1.0, 0.0])


def first_order_lowpass(gain, rate):
    """``gain * rate / (s + rate)``; unit DC gain times ``gain``."""
    return RationalTf([gain * rate], [1.0, rate])


def lowpass_predictor(gamma, lam):
    """State-space form of ``gamma*lam / (s + lam)``."""
    return StateSpaceSiso([[-lam]], [gamma * lam], [1.0])


def _check_pole_distance(g, s):
    poles = g.poles
    if poles.size and np.min(np.abs(poles - s)) <= POLE_DISTANCE:
        raise PoleError(f"g evaluated at a pole (s = {s})")


def freq_response(g, omega):
    """Complex frequency response ``g(j omega)``."""
    s = 1j * float(omega)
    _check_pole_distance(g, s)
    return complex(g(s))


def to_frequency_point(g, omega):
    val = freq_response(g, omega)
    phase_lag = -np.angle(val)
    # np.angle returns (-pi, pi]; negating maps pi to -pi, fold it back.
    if phase_lag <= -np.pi:
        phase_lag += 2 * np.pi
    return FrequencyPoint(float(omega), float(abs(val)), float(phase_lag))


def is_passive(g, omega_grid=None):
    """Sampled positive-real check on ``Re g(jw)`` over a frequency grid.

    This is a necessary condition evaluated on finitely many points, not a
    certificate. Values within ``MARGINAL_BAND`` of zero are reported as
    marginal (pure integrators sit exactly on the boundary).
    """
    grid = default_omega_grid() if omega_grid is None else np.asarray(omega_grid, dtype=float)
    if grid.size == 0:
        raise DomainError("empty frequency grid")
    re = np.array([freq_response(g, w).real for w in grid])
    k = int(np.argmin(re))
    lo = float(re[k])
    if lo < -MARGINAL_BAND:
        verdict = PassivityVerdict.NOT_PASSIVE
    elif lo <= MARGINAL_BAND:
        verdict = PassivityVerdict.MARGINAL
    else:
        verdict = PassivityVerdict.PASSIVE
    return PassivityReport(verdict, lo, float(grid[k]))


def hinf_estimate(g, omega_grid=None):
    """Max of ``|g(jw)|`` over a dense grid (includes ``w = 0``)."""
    grid = default_omega_grid(4000, 1e-5, 1e5) if omega_grid is None else omega_grid
    grid = np.concatenate([[0.0], np.asarray(grid, dtype=float)])
    return float(max(abs(freq_response(g, w)) for w in grid))


def dc_gain(h):
    """``C (-A)^{-1} B`` of a state-space system."""
    A = h.A
    if abs(np.linalg.det(A)) < 1e-300 or np.linalg.cond(A) > 1e14:
        raise SingularityError("A is singular; DC gain undefined")
    return float(h.C @ np.linalg.solve(-A, h.B))


def ss_derivative(h, x_h, u):
    """Right-hand side ``A x_h + B u``.

    ``x_h`` may be a single state of shape ``(m,)`` with scalar ``u``, or a
    stack of ``n`` independent channel states of shape ``(n, m)`` with
    ``u`` of shape ``(n,)``.
    """
    x_h = np.asarray(x_h, dtype=float)
    m = h.order
    if x_h.ndim == 1:
        if x_h.shape != (m,) or np.ndim(u) != 0:
            raise StructureError(f"expected state ({m},) and scalar input")
        return h.A @ x_h + h.B * float(u)
    u = np.asarray(u, dtype=float)
    if x_h.ndim != 2 or x_h.shape[1] != m or u.shape != (x_h.shape[0],):
        raise StructureError(f"expected states (n, {m}) and inputs (n,)")
    return x_h @ h.A.T + u[:, None] * h.B[None, :]


def ss_output(h, x_h):
    x_h = np.asarray(x_h, dtype=float)
    return x_h @ h.C


def ss_to_tf(h):
    """Exact transfer function of a first- or second-order realisation."""
    A, B, C = h.A, h.B, h.C
    if h.order == 1:
        return RationalTf([C[0] * B[0]], [1.0, -A[0, 0]])
    if h.order == 2:
        # C adj(sI - A) B over det(sI - A)
        adj0 = np.array([[-A[1, 1], A[0, 1]], [A[1, 0], -A[0, 0]]])
        num = [C @ B, C @ adj0 @ B]
        den = [1.0, -np.trace(A), np.linalg.det(A)]
        return RationalTf(num, den)
    raise DomainError("ss_to_tf supports first and second order only")


def tf_to_ss(g):
    """Controllable canonical realisation of a strictly proper first/second-order tf."""
    den = g.den
    order = den.size - 1
    num = np.concatenate([np.zeros(order - g.num.size), g.num]) if g.num.size <= order else None
    if num is None or order not in (1, 2):
        raise DomainError("tf_to_ss needs a strictly proper first or second-order tf")
    if order == 1:
        return StateSpaceSiso([[-den[1]]], [1.0], [num[0]])
    A = [[0.0, 1.0], [-den[2], -den[1]]]
    return StateSpaceSiso(A, [0.0, 1.0], [num[1], num[0]])


def ss_time_response(h, u, t, x0=None):
    """Output of ``h`` driven by the scalar input ``u(t)`` on the uniform grid ``t`` (RK4)."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise DomainError("need a time grid with at least two points")
    dt = t[1] - t[0]
    x = np.zeros(h.order) if x0 is None else np.asarray(x0, dtype=float)
    out = np.empty(t.size)
    out[0] = h.C @ x
    for k in range(t.size - 1):
        tk = t[k]
        u0, um, u1 = u(tk), u(tk + 0.5 * dt), u(tk + dt)
        k1 = h.A @ x + h.B * u0
        k2 = h.A @ (x + 0.5 * dt * k1) + h.B * um
        k3 = h.A @ (x + 0.5 * dt * k2) + h.B * um
        k4 = h.A @ (x + dt * k3) + h.B * u1
        x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = h.C @ x
    return out
