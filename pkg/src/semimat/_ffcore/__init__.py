"""Hot GF(q) kernels with backend selection.

Importing this package picks the compiled Cython kernels when they were
built, otherwise the pure-Python fallback with the identical signatures.
Setting SEMIMAT_PURE=1 in the environment forces the fallback.
"""

import os

from semimat._ffcore import pykernels

if os.environ.get("SEMIMAT_PURE"):
    _impl = pykernels
    BACKEND = "python"
else:
    try:
        from semimat._ffcore import _ckernels as _impl
        BACKEND = "c"
    except ImportError:
        _impl = pykernels
        BACKEND = "python"

matmul = _impl.matmul
rref = _impl.rref
reduce_row = _impl.reduce_row


def backend():
    """Name of the active kernel backend: "c" or "python"."""
    return BACKEND
