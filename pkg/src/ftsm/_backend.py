"""Select the compiled hot loop when available, numpy otherwise."""

import os

from . import _kernels_py

if os.environ.get("FTSM_PURE_PYTHON") == "1":
    _ext = None
else:
    try:
        from . import _kernels_ext as _ext
    except ImportError:  # extension not built
        _ext = None

BACKEND = "cython" if _ext is not None else "python"
kernel_weighted_sum = _ext.kernel_weighted_sum if _ext is not None else _kernels_py.kernel_weighted_sum
