"""Select the compiled kernels when importable, else the pure-Python twin.

Set ``RATIO_DECONV_PURE_PYTHON=1`` to force the fallback (used by the
benchmark and by the backend-equivalence tests).
"""
from __future__ import annotations

import os

from ratio_deconv import _pykernels

if os.environ.get("RATIO_DECONV_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from ratio_deconv import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

lanczos_ln_gamma = _impl.lanczos_ln_gamma
series_1f1 = _impl.series_1f1
series_2f1 = _impl.series_2f1
euler_2f1_sums = _impl.euler_2f1_sums

__all__ = [
    "BACKEND",
    "lanczos_ln_gamma",
    "series_1f1",
    "series_2f1",
    "euler_2f1_sums",
]
