"""Kernel backend selection.

The solver and cost-model inner loops live in `_impl` as single-source,
nopython-compatible functions. By default they are JIT-compiled with numba;
set RAILYARD_JIT=0 to run the identical source as plain numpy/Python loops
(slower, dependency-free), or RAILYARD_JIT=1 to fail hard if numba is
missing. `benchmarks/bench_backends.py` compares the two paths.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

from . import _impl

_KERNEL_NAMES = [
    "attr_sum_table",
    "eval_io_intersect",
    "greedy_cover",
    "eval_io_greedy_cover",
    "assign_attributes",
    "merge_partitions",
    "min_cover",
    "enum_partitions",
    "search_layouts",
]

F_TOL = _impl.F_TOL


def _bundle(module, name: str) -> SimpleNamespace:
    ns = SimpleNamespace(name=name)
    for fn in _KERNEL_NAMES:
        setattr(ns, fn, getattr(module, fn))
    return ns


def build_backend(jit: bool) -> SimpleNamespace:
    """Bundle the interpreted kernels, or their compiled clones from
    `_impl_jit` (compilation itself is lazy, on first call)."""
    if not jit:
        return _bundle(_impl, "numpy")
    from . import _impl_jit

    return _bundle(_impl_jit, "numba")


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _choose() -> SimpleNamespace:
    flag = os.environ.get("RAILYARD_JIT", "").strip().lower()
    if flag in ("0", "false", "no", "off"):
        return build_backend(False)
    if flag in ("1", "true", "yes", "on"):
        return build_backend(True)  # raises if numba is missing
    return build_backend(_numba_available())


active = _choose()


def backend_name() -> str:
    return active.name


attr_sum_table = active.attr_sum_table
eval_io_intersect = active.eval_io_intersect
greedy_cover = active.greedy_cover
eval_io_greedy_cover = active.eval_io_greedy_cover
assign_attributes = active.assign_attributes
merge_partitions = active.merge_partitions
min_cover = active.min_cover
enum_partitions = active.enum_partitions
search_layouts = active.search_layouts
