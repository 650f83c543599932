"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback is used. ``NEHARI_SHAPE_BACKEND=python`` forces the fallback and
``NEHARI_SHAPE_BACKEND=compiled`` makes a missing extension an error.
"""

import os

from . import _kernels_py

_requested = os.environ.get("NEHARI_SHAPE_BACKEND", "auto").strip().lower()

_compiled = None
if _requested != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:
        if _requested == "compiled":
            raise
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py

#: Name of the active backend, ``"compiled"`` or ``"python"``.
BACKEND = "compiled" if _compiled is not None else "python"

pairwise_sum = _impl.pairwise_sum
q1_local_stiffness = _impl.q1_local_stiffness
q1_local_mass = _impl.q1_local_mass


def compiled_available():
    return _compiled is not None


def backends():
    """Return ``{name: module}`` for every importable backend."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
