"""JIT-compiled clones of the kernel implementations.

The kernel source of record is `_impl`. Compiled kernels must resolve the
kernels they call as numba dispatchers, so each function is cloned with this
module's globals and wrapped here; `_impl` itself stays interpreted for the
numpy backend. Importing this module requires numba.
"""

import types

import numpy as np  # noqa: F401  (kernel bodies resolve np through these globals)
from numba import njit

from . import _impl

F_TOL = _impl.F_TOL

_NAMES = [
    "attr_sum_table",
    "eval_io_intersect",
    "greedy_cover",
    "eval_io_greedy_cover",
    "assign_attributes",
    "merge_partitions",
    "min_cover",
    "enum_partitions",
    "search_layouts",
    "_sizes_of",
    "_merged",
]


def _clone(fn):
    out = types.FunctionType(fn.__code__, globals(), fn.__name__,
                             fn.__defaults__, fn.__closure__)
    out.__module__ = __name__
    out.__doc__ = fn.__doc__
    return out


for _name in _NAMES:
    globals()[_name] = njit(cache=True)(_clone(getattr(_impl, _name)))
