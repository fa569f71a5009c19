"""Hot numeric kernels.

Each kernel exists twice, in ``_numpy`` and ``_numba``; the module-level names
bind to the numba versions unless ``GFACCESS_DISABLE_NUMBA`` is set or numba
is unavailable. Callers always pass contiguous arrays of the documented dtypes.
"""
from .. import _accel
from . import _numpy

BACKEND = "numba" if _accel.USE_NUMBA else "numpy"

if _accel.USE_NUMBA:
    from . import _numba as _impl
else:
    _impl = _numpy

cover_mask = _impl.cover_mask
cover_counts = _impl.cover_counts
count_covered_outside = _impl.count_covered_outside
log_sum_terms = _impl.log_sum_terms
mf_power_terms = _impl.mf_power_terms

__all__ = [
    "BACKEND",
    "cover_mask",
    "cover_counts",
    "count_covered_outside",
    "log_sum_terms",
    "mf_power_terms",
]
