"""Kernel backend selection.

The hot inner loops in :mod:`markovlis._kernels` exist in two versions: a
numba ``@njit`` one and a pure NumPy/Python fallback.  The environment
variable ``MARKOVLIS_BACKEND`` picks one:

* unset / empty -- numba if importable, NumPy otherwise;
* ``numba``     -- require numba (ImportError if missing);
* ``numpy``     -- force the fallback even when numba is installed.

Both backends consume identical inputs and produce bit-identical outputs,
so the flag only affects speed.  ``benchmarks/bench_backends.py`` compares
them.
"""

import os

ENV_VAR = "MARKOVLIS_BACKEND"

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _resolve() -> str:
    choice = os.environ.get(ENV_VAR, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(
            f"{ENV_VAR} must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    if choice == "numba" and not HAVE_NUMBA:
        raise ImportError(f"{ENV_VAR}=numba but numba is not installed")
    return "numba" if HAVE_NUMBA else "numpy"


BACKEND = _resolve()
USING_NUMBA = BACKEND == "numba"
