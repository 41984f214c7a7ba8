"""Kernel backend selection.

The compiled extension is used when it imports; set ``CWF_PURE=1`` to force
the pure-Python implementation.
"""

import os

from . import _kernels_py

if os.environ.get("CWF_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = _impl.BACKEND
match_pattern = _impl.match_pattern
hev_scan = _impl.hev_scan


def backends():
    """All importable backends, pure Python first."""
    found = [_kernels_py]
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found.append(_kernels)
    return found
