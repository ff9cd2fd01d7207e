"""Kernel selection: the compiled explorer when built, else the numpy one."""
from . import _kernels_py

try:
    from . import _explore as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
explore = _compiled.explore if _compiled is not None else _kernels_py.explore


def available() -> list[str]:
    return ["cython", "python"] if _compiled is not None else ["python"]


def use(name: str) -> None:
    """Switch the active kernel (``"cython"`` or ``"python"``) for this process."""
    global explore, BACKEND
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernel is not built")
        explore = _compiled.explore
    elif name == "python":
        explore = _kernels_py.explore
    else:
        raise ValueError(f"unknown kernel {name!r}")
    BACKEND = name
