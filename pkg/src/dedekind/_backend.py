"""Select the compiled kernels when available, else the pure-Python ones.

Set ``DEDEKIND_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from dedekind import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if os.environ.get("DEDEKIND_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from dedekind import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"

__all__ = ["BACKEND", "kernels"]
