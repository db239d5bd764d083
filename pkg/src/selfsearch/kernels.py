"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set SELFSEARCH_PURE=1 to force the pure-Python kernels even when the
compiled extension is installed. ``KERNEL_BACKEND`` names the active one.
"""

import os

from selfsearch import _kernels_py

if os.environ.get("SELFSEARCH_PURE") == "1":
    _impl = _kernels_py
else:
    try:
        from selfsearch import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

KERNEL_BACKEND: str = _impl.BACKEND_NAME

FNV64_OFFSET = _kernels_py.FNV64_OFFSET
FNV64_PRIME = _kernels_py.FNV64_PRIME

fnv1a64 = _impl.fnv1a64
count_tokens = _impl.count_tokens
decode_postings = _impl.decode_postings
accumulate_postings = _impl.accumulate_postings
