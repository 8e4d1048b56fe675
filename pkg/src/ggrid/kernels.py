"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementations in ``_pykernels`` take over. Set ``GGRID_PURE_PYTHON=1``
to force the fallback. Both backends share one contract, documented in
``_pykernels``.
"""
from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _pykernels

try:
    if os.environ.get("GGRID_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

BACKEND = "cython" if _ckernels is not None else "python"
_impl = BACKENDS[BACKEND]


def get_backend(name: str | None = None) -> ModuleType:
    if name is None:
        return _impl
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


def _prep(dist, offsets):
    return (
        np.ascontiguousarray(dist, dtype=np.float64),
        np.ascontiguousarray(offsets, dtype=np.intp),
    )


def selection_mst_weights(dist, offsets, backend: str | None = None) -> np.ndarray:
    return get_backend(backend).selection_mst_weights(*_prep(dist, offsets))


def selection_tour_weights(dist, offsets, backend: str | None = None) -> np.ndarray:
    return get_backend(backend).selection_tour_weights(*_prep(dist, offsets))


def prufer_dp_weights(dist, offsets, backend: str | None = None) -> np.ndarray:
    return get_backend(backend).prufer_dp_weights(*_prep(dist, offsets))


def matching_dp(d, backend: str | None = None) -> tuple[float, list[tuple[int, int]]]:
    return get_backend(backend).matching_dp(np.ascontiguousarray(d, dtype=np.float64))
