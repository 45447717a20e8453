"""Kernel backend selection: compiled extension if available, else pure Python.

``harmgeo.kernels.impl`` exposes the active module; both backends provide the
same functions (see _kernels_py.py).  Set HARMGEO_PURE_PYTHON=1 to force the
fallback, e.g. for benchmarking.
"""

import os

if os.environ.get("HARMGEO_PURE_PYTHON"):
    from . import _kernels_py as impl
else:
    try:
        from . import _kernels as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as impl

BACKEND = impl.BACKEND

christoffel = impl.christoffel
sectoral_partials = impl.sectoral_partials
sectoral_rhs = impl.sectoral_rhs
chart_sectoral_partials = impl.chart_sectoral_partials
chart_sectoral_rhs = impl.chart_sectoral_rhs
sectoral_hamiltonian2 = impl.sectoral_hamiltonian2
