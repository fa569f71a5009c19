"""Backend switch for the numeric kernels.

Set ``GFACCESS_DISABLE_NUMBA=1`` before import to force the pure-numpy path.
"""
import os

_FLAG = "GFACCESS_DISABLE_NUMBA"


def numba_requested() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")


try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and numba_requested()
