"""Peak-search kernels with a compiled core and a pure-numpy fallback.

The Cython extension is preferred when importable; set ``PADPKIT_PURE=1``
to force the numpy fallback (used by the benchmark to compare both).
"""

import os

from . import _pure

_FORCE_PURE = os.environ.get("PADPKIT_PURE", "").strip() not in ("", "0")

if not _FORCE_PURE:
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "python"
else:
    _impl = _pure
    BACKEND = "python"

local_maxima_2d = _impl.local_maxima_2d
local_maxima_1d = _impl.local_maxima_1d


def backend_name():
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND


__all__ = ["local_maxima_2d", "local_maxima_1d", "backend_name", "BACKEND"]
