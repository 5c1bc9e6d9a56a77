"""Optional numba acceleration.

Kernels are written in the numpy subset numba understands and decorated
with :func:`njit`. Setting ``LEARNDYN_NUMBA=0`` in the environment (read once
at import) turns the decorator into a no-op so the same source runs as plain
numpy; this is also the fallback when numba cannot be imported.
"""

import os

_FALSEY = {"0", "false", "no", "off"}

NUMBA_REQUESTED = os.environ.get("LEARNDYN_NUMBA", "1").strip().lower() not in _FALSEY

try:
    if not NUMBA_REQUESTED:
        raise ImportError
    import numba as _numba
except ImportError:
    _numba = None

NUMBA_ENABLED = _numba is not None


def njit(fn=None, **kwargs):
    """``numba.njit(cache=True)`` when enabled, identity otherwise."""
    if fn is None:
        return lambda f: njit(f, **kwargs)
    if not NUMBA_ENABLED:
        return fn
    kwargs.setdefault("cache", True)
    return _numba.njit(**kwargs)(fn)
