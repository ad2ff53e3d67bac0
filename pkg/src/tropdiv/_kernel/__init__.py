"""Reduction kernel selection.

The compiled Cython kernel is used when available; the pure-Python twin is
the fallback and the reference.  Both implement the same deterministic
schedule and must produce bit-identical results (see
tests/test_kernel_parity.py and benchmarks/bench_kernel.py).

Set TROPDIV_KERNEL=pure or TROPDIV_KERNEL=compiled to force a choice.
"""

from __future__ import annotations

import os

from . import pyreduce

_choice = os.environ.get("TROPDIV_KERNEL", "auto").lower()
_compiled = None
if _choice in ("auto", "compiled"):
    try:
        from . import _fastreduce as _compiled  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise ImportError(
                "TROPDIV_KERNEL=compiled but the extension is not built; "
                "run `pip install -e . --no-build-isolation`"
            )
        _compiled = None

active = _compiled if _compiled is not None else pyreduce


def kernel_name() -> str:
    return "compiled" if active is not pyreduce else "pure"


class KernelOverflow(RuntimeError):
    pass


# the compiled module raises its own KernelOverflow; normalize
if _compiled is not None:
    KernelOverflow = _compiled.KernelOverflow  # type: ignore[misc]
