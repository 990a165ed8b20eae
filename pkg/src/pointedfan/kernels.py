"""Backend selection for the hot loops.

The compiled extension ``_kernels`` is used when it imports; otherwise the
pure-Python reference implementations are used. Set
``POINTEDFAN_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pebble_py, _sphere_py

BACKEND = "python"

if not os.environ.get("POINTEDFAN_PURE_PYTHON"):
    try:
        from . import _kernels
    except ImportError:  # extension not built
        _kernels = None
else:
    _kernels = None

if _kernels is not None:
    BACKEND = "compiled"
    pebble_game = _kernels.pebble_game
    first_crossing = _kernels.first_crossing
else:
    pebble_game = _pebble_py.pebble_game
    first_crossing = _sphere_py.first_crossing

py_pebble_game = _pebble_py.pebble_game
py_first_crossing = _sphere_py.first_crossing
