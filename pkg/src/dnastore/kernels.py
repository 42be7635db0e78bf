"""Backend selection for the hot kernels.

The compiled extension is used when it imports cleanly; otherwise the
pure-Python module takes over.  Setting ``DNASTORE_PURE_PYTHON=1`` forces the
fallback, which the benchmark and the parity tests rely on.
"""

from __future__ import annotations

import os

from . import _pykernels as python_backend

if os.environ.get("DNASTORE_PURE_PYTHON") == "1":
    _impl = python_backend
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = python_backend

BACKEND: str = _impl.BACKEND

hamming = _impl.hamming
correlation = _impl.correlation
correlated = _impl.correlated
rds_max = _impl.rds_max
gc_count = _impl.gc_count
compatible = _impl.compatible
count_avoiders = _impl.count_avoiders
lcp = _impl.lcp
stem_free = _impl.stem_free


def compiled_backend():
    """Return the compiled module, or None when it was not built."""
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels
