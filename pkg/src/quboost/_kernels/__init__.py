"""Solver kernel backend selection.

The compiled Cython extension is preferred; the pure numpy fallback is
used when the extension is unavailable or ``QUBOOST_FORCE_PURE`` is set.
Both backends share the SplitMix64 stream and operation order, so results
are identical either way; only the speed differs.
"""

import os

from . import _purecore

if os.environ.get("QUBOOST_FORCE_PURE"):
    _impl = _purecore
else:
    try:
        from . import _fastcore as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _purecore

BACKEND = _impl.BACKEND
tabu_qubo = _impl.tabu_qubo
anneal_qubo = _impl.anneal_qubo
anneal_zero_one = _impl.anneal_zero_one


def active_backend() -> str:
    """Name of the kernel backend in use: 'compiled' or 'pure'."""
    return BACKEND
