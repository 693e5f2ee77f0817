"""Word kernels: the compiled extension when it was built, else pure Python.

Callers go through this module's attributes, so :func:`select` switches the
implementation everywhere (the tests and the benchmark compare both).
"""

from __future__ import annotations

from types import ModuleType
from typing import Optional

from . import _kernel_py

_compiled: Optional[ModuleType]
try:
    from . import _kernel as _compiled  # type: ignore[attr-defined, no-redef]
except ImportError:  # extension not built
    _compiled = None

INF = _kernel_py.INF
NOT_FOUND = _kernel_py.NOT_FOUND
FOUND = _kernel_py.FOUND
EXHAUSTED = _kernel_py.EXHAUSTED

IMPLEMENTATION = ""


def available() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def select(name: str) -> None:
    """Use ``"compiled"`` or ``"python"`` kernels from now on."""
    global IMPLEMENTATION, norms, truncate, distinguish, bounded, residual
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("the compiled kernel extension is not built")
        impl: ModuleType = _compiled
    elif name == "python":
        impl = _kernel_py
    else:
        raise ValueError(f"unknown kernel implementation {name!r}")
    IMPLEMENTATION = name
    norms = impl.norms
    truncate = impl.truncate
    distinguish = impl.distinguish
    bounded = impl.bounded
    residual = impl.residual


select("compiled" if _compiled is not None else "python")
