"""Split-kernel backend selection.

The compiled extension is preferred when importable; otherwise the
pure-numpy implementation takes over. Both compute bit-identical splits
(see their docstrings), so backend choice never changes a trained model.
Set ``COTRAIN_KERNEL=python`` or ``COTRAIN_KERNEL=compiled`` to pin one.
"""

from __future__ import annotations

import os

import numpy as np

from . import _split_py

_BACKENDS = {"python": _split_py.best_split}

try:
    from . import _split_cy

    _BACKENDS["compiled"] = _split_cy.best_split
except ImportError:
    pass


def _initial_backend() -> str:
    forced = os.environ.get("COTRAIN_KERNEL")
    if forced:
        if forced not in _BACKENDS:
            raise ImportError(
                f"COTRAIN_KERNEL={forced!r} but available backends are {sorted(_BACKENDS)}"
            )
        return forced
    return "compiled" if "compiled" in _BACKENDS else "python"


_active = _initial_backend()


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def active_backend() -> str:
    return _active


def use_backend(name: str) -> None:
    """Switch the active kernel (used by tests and the benchmark)."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(_BACKENDS)}")
    _active = name


def best_split(vals: np.ndarray, codes: np.ndarray, n_classes: int):
    """Best (row, threshold) Gini split via the active backend; see
    ``_split_py.best_split`` for the exact contract."""
    return _BACKENDS[_active](vals, codes, n_classes)
