"""Numerical kernels with an optional compiled fast path.

The Cython extension is built when a toolchain is available; otherwise
the numpy implementations in :mod:`._py` are used. Set the environment
variable ``STABLESEP_PURE_PYTHON=1`` to force the fallback regardless.
``BACKEND`` reports which implementation is active.
"""

import os

from . import _py

if os.environ.get("STABLESEP_PURE_PYTHON"):
    _impl = _py
    BACKEND = "python"
else:
    try:
        from . import _cy as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _py
        BACKEND = "python"

pearson_triple = _impl.pearson_triple
rff_transform = _impl.rff_transform
median_pairwise_distance = _impl.median_pairwise_distance
rowwise_outer = _impl.rowwise_outer

__all__ = [
    "BACKEND",
    "pearson_triple",
    "rff_transform",
    "median_pairwise_distance",
    "rowwise_outer",
]
