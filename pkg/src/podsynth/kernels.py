"""Hot graph kernels: the compiled extension when available, else pure Python.

Set ``PODSYNTH_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("PODSYNTH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

bfs_multi = _impl.bfs_multi
apsp_bfs = _impl.apsp_bfs
DynamicDAG = _impl.DynamicDAG

__all__ = ["BACKEND", "DynamicDAG", "apsp_bfs", "bfs_multi"]
