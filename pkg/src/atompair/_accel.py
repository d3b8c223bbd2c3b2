"""Backend selection for the hot kernels.

By default the kernels in :mod:`atompair.kernels` are compiled with numba's
``@njit``. Setting the environment variable ``ATOMPAIR_NO_NUMBA`` to a
non-empty value (other than ``0``) before import selects the pure
numpy/Python fallback: the same functions run uncompiled. Results agree to
floating-point roundoff; only speed differs (see ``scripts/benchmark.py``).
"""

import os

DISABLE_ENV = "ATOMPAIR_NO_NUMBA"


def _disabled_by_env() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip() not in ("", "0")


NUMBA_ENABLED = False
if not _disabled_by_env():
    try:
        from numba import njit as _numba_njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a normal dependency
        NUMBA_ENABLED = False


if NUMBA_ENABLED:

    def njit(*args, **kwargs):
        return _numba_njit(*args, **kwargs)

else:

    def njit(*args, **kwargs):
        # plain pass-through decorator, usable bare or with options
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
