"""Float kernel backend, chosen at import.

The Cython extension ``_kernels_c`` is used when it was built; otherwise the
pure-Python ``_kernels_py`` is. :func:`use_backend` switches explicitly.
"""

from . import _kernels_py
from ._kernels_py import SPLIT_NEGATIVE, SPLIT_OK, SPLIT_SINGULAR  # noqa: F401

try:
    from . import _kernels_c
except ImportError:  # pragma: no cover - depends on the build
    _kernels_c = None

BACKENDS = {"python": _kernels_py}
if _kernels_c is not None:
    BACKENDS["cython"] = _kernels_c

BACKEND = "cython" if _kernels_c is not None else "python"
split_float = BACKENDS[BACKEND].split_float
proportional_float = BACKENDS[BACKEND].proportional_float


def use_backend(name: str) -> str:
    """Route the float kernels through ``name``; returns the previous backend."""
    global BACKEND, split_float, proportional_float
    if name not in BACKENDS:
        raise ValueError(f"kernel backend {name!r} is not available; have {sorted(BACKENDS)}")
    prev = BACKEND
    BACKEND = name
    split_float = BACKENDS[name].split_float
    proportional_float = BACKENDS[name].proportional_float
    return prev
