"""Select the term-kernel backend at import time.

The compiled ``_ckernels`` extension is used when it was built; otherwise
the pure-Python ``_pykernels`` fallback.  Setting ``QDUAL_PURE_PYTHON=1``
forces the fallback.
"""

import os

if os.environ.get("QDUAL_PURE_PYTHON", "") not in ("", "0"):
    from qdual._pykernels import BACKEND, add, dense_gcd, divide, mul, scale, sub, sum_terms
else:
    try:
        from qdual._ckernels import BACKEND, add, dense_gcd, divide, mul, scale, sub, sum_terms
    except ImportError:
        from qdual._pykernels import BACKEND, add, dense_gcd, divide, mul, scale, sub, sum_terms

__all__ = ["BACKEND", "add", "dense_gcd", "divide", "mul", "scale", "sub", "sum_terms"]
