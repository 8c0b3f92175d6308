"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when
``CODEMIT_PURE_PYTHON`` is set, the numpy implementations are used.
"""
from __future__ import annotations

import os

from . import _fallback

if os.environ.get("CODEMIT_PURE_PYTHON"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

apply_1q = _impl.apply_1q
apply_cnot = _impl.apply_cnot
apply_rz = _impl.apply_rz
apply_rzz = _impl.apply_rzz
apply_pauli = _impl.apply_pauli
apply_mcz = _impl.apply_mcz
sample_index = _impl.sample_index
apply_monomial = _impl.apply_monomial
apply_h_layer = _impl.apply_h_layer

BACKENDS = {"python": _fallback}
if BACKEND == "cython":
    BACKENDS["cython"] = _impl
