"""Orthogonal matching pursuit kernel with backend selection.

The compiled extension is used when it imported cleanly; set the environment
variable NUWSIM_PURE_PYTHON to any value other than "" or "0" before import
to force the NumPy reference kernel. `BACKEND` names the active choice.
"""

from __future__ import annotations

import os

import numpy as np

from . import _omp_py

__all__ = ["omp_greedy", "BACKEND"]

_forced_python = os.environ.get("NUWSIM_PURE_PYTHON", "") not in ("", "0")

# Binding _omp_cy before the import would make `from . import` a no-op
# (the loader skips submodules the package already has as attributes),
# so the fallback assignment lives in the except path only.
if _forced_python:
    _omp_cy = None
else:
    try:
        from . import _omp_cy
    except ImportError:
        _omp_cy = None

if _omp_cy is None:
    BACKEND = "python"
    omp_greedy = _omp_py.omp_greedy
else:
    BACKEND = "cython"

    def omp_greedy(a, y, k_max, rel_tol):
        """Compiled kernel with the contract of `_omp_py.omp_greedy`.

        Rank-deficient problems are redone by the reference kernel, whose
        minimum-norm least-squares path handles them.
        """
        a = np.asarray(a, dtype=np.complex128)
        y = np.ascontiguousarray(y, dtype=np.complex128)
        ah = np.ascontiguousarray(a.conj().T)
        out = _omp_cy.omp_greedy(ah, y, int(k_max), float(rel_tol))
        if out[3]:
            return _omp_py.omp_greedy(a, y, k_max, rel_tol)
        return out
