"""Softmax, log-sum-exp and probability-simplex utilities.

The ``*_k`` functions are the unchecked kernels used inside the integrator;
the public functions validate their input and return fresh arrays.
"""

import numpy as np

from ._jit import njit
from .errors import DomainError

SPAN_ONES_TOL = 1e-10


@njit
def softmax_k(v):
    w = np.exp(v - np.max(v))
    return w / np.sum(w)


@njit
def lse_k(v):
    vmax = np.max(v)
    return vmax + np.log(np.sum(np.exp(v - vmax)))


@njit
def project_simplex_k(v):
    n = v.shape[0]
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    theta = 0.0
    for k in range(n - 1, -1, -1):
        t = (css[k] - 1.0) / (k + 1)
        if u[k] > t:
            theta = t
            break
    return np.maximum(v - theta, 0.0)


def _as_finite_vector(v, name="v"):
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def softmax(v):
    """Map a score vector to the interior of the simplex, ``exp(v) / sum(exp(v))``."""
    return softmax_k(_as_finite_vector(v))


def lse(v):
    """Overflow-safe ``log(sum(exp(v)))``."""
    return float(lse_k(_as_finite_vector(v)))


def softmax_jacobian(v):
    """Jacobian of softmax at ``v``: ``diag(s) - s s^T`` with ``s = softmax(v)``.

    Symmetric positive semidefinite with kernel ``span{1}``.
    """
    s = softmax(v)
    return np.diag(s) - np.outer(s, s)


def kl_divergence(x, y):
    """Kullback-Leibler divergence ``sum x_i log(x_i / y_i)`` with ``0 log 0 = 0``.

    Raises
    ------
    DomainError
        If some ``x_i > 0`` has ``y_i == 0`` (the divergence is infinite), or
        the shapes differ.
    """
    x = _as_finite_vector(x, "x")
    y = _as_finite_vector(y, "y")
    if x.shape != y.shape:
        raise DomainError(f"shape mismatch {x.shape} vs {y.shape}")
    support = x > 0
    if np.any(y[support] <= 0):
        raise DomainError("infinite divergence: y vanishes where x is positive")
    xs = x[support]
    return float(np.sum(xs * (np.log(xs) - np.log(y[support]))))


def project_simplex(v):
    """Euclidean projection onto the probability simplex (sort and threshold)."""
    return project_simplex_k(_as_finite_vector(v))


def in_span_ones(v, tol=SPAN_ONES_TOL):
    """True when every entry of ``v`` is within ``tol`` of the entries' mean."""
    v = np.asarray(v, dtype=float)
    return bool(np.max(np.abs(v - v.mean())) < tol)


def lemma1_form(v):
    """The quadratic-like form ``v^T (softmax(v) - softmax(-v))``.

    Nonnegative for every ``v`` and zero exactly on ``span{1}``.
    """
    v = _as_finite_vector(v)
    return float(v @ (softmax_k(v) - softmax_k(-v)))


def lemma1_pairwise(v):
    """Same quantity via the pairwise ``sum (v_i - v_j) sinh(v_i - v_j)`` expansion.

    Every term is nonnegative, so this form cannot go negative through
    cancellation. Large score gaps overflow ``sinh``; keep ``|v_i - v_j|``
    below ~700.
    """
    v = _as_finite_vector(v)
    d = v[:, None] - v[None, :]
    total = np.sum(np.triu(d * np.sinh(d), k=1))
    z1 = np.sum(np.exp(v))
    z2 = np.sum(np.exp(-v))
    return float(2.0 * total / (z1 * z2))


def is_simplex(x, tol=1e-12):
    x = np.asarray(x, dtype=float)
    return bool(x.ndim == 1 and np.all(x >= -tol) and abs(x.sum() - 1.0) <= tol * max(1, x.size))
