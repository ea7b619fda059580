"""Kernel selection: the compiled extension when importable, else numpy.

Set ``QNETCODE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from qnetcode import _fallback

if os.environ.get("QNETCODE_PURE_PYTHON") == "1":
    kernels = _fallback
    NAME = "python"
else:
    try:
        from qnetcode import _kernels as kernels
        NAME = "compiled"
    except ImportError:
        kernels = _fallback
        NAME = "python"

apply_1q = kernels.apply_1q
apply_cnot = kernels.apply_cnot
jacobi_eigh = kernels.jacobi_eigh
conditional_entropy_grid = kernels.conditional_entropy_grid
