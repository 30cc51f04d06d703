"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over.  Setting ``PLANARVIT_KERNELS=python`` forces the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels


def _load(name: str) -> ModuleType:
    if name == "python":
        return _pykernels
    try:
        from . import _ckernels
    except ImportError:
        if name == "compiled":
            raise
        return _pykernels
    return _ckernels


def get_backend(name: str = "auto") -> ModuleType:
    """Return the kernel module for ``name`` in {"auto", "compiled", "python"}."""
    return _load(name)


_active = _load(os.environ.get("PLANARVIT_KERNELS", "auto"))

BACKEND = "python" if _active is _pykernels else "compiled"

trace_permutation = _active.trace_permutation
bfs_region = _active.bfs_region
leftmost_walk = _active.leftmost_walk
split_region = _active.split_region
propagate_face_labels = _active.propagate_face_labels
bfs_csr = _active.bfs_csr

SPLIT_OK = _pykernels.SPLIT_OK
SPLIT_CONFLICT = _pykernels.SPLIT_CONFLICT
SPLIT_UNCLASSIFIED = _pykernels.SPLIT_UNCLASSIFIED
