"""Backend selection for the map-search kernel.

The compiled extension is used when it imported and the instance fits in a
64-bit word; otherwise the pure-Python kernel runs. ``FLIPLAB_PURE=1`` forces
the pure-Python path.
"""

import os

from . import _search

try:
    from ._ext import _ckernel
except ImportError:  # extension not built
    _ckernel = None

HAVE_EXTENSION = _ckernel is not None


def backend_name() -> str:
    return "cython" if _use_ext(0, 0) else "python"


def _use_ext(n_src, n_tgt):
    if _ckernel is None or os.environ.get("FLIPLAB_PURE", "") not in ("", "0"):
        return False
    return n_src <= 64 and n_tgt <= 64


def search(src_adj, tgt_adj, order, fixed, limit=-1):
    if _use_ext(len(src_adj), len(tgt_adj)):
        return _ckernel.search(src_adj, tgt_adj, order, fixed, limit)
    return _search.search(src_adj, tgt_adj, order, fixed, limit)


def count(src_adj, tgt_adj, order, fixed):
    if _use_ext(len(src_adj), len(tgt_adj)):
        return _ckernel.count(src_adj, tgt_adj, order, fixed)
    return _search.count(src_adj, tgt_adj, order, fixed)
