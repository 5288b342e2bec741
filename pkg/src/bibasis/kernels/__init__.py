"""Hot-loop kernel selection: compiled core with a pure-numpy fallback.

The compiled backend (`_fast`, Cython) is used when the extension was built;
otherwise the numpy reference backend (`_ref`) takes over transparently.
Set BIBASIS_KERNEL=ref or BIBASIS_KERNEL=fast to force a backend (fast raises
if the extension is unavailable).  `benchmarks/bench_kernels.py` compares the
two on representative workloads.
"""

from __future__ import annotations

import os

from . import _ref

_choice = os.environ.get("BIBASIS_KERNEL", "").strip().lower()
if _choice not in ("", "fast", "ref"):
    raise ValueError(f"BIBASIS_KERNEL must be 'fast' or 'ref', got {_choice!r}")

backend_name = "ref"
_impl = _ref
if _choice != "ref":
    try:
        from . import _fast  # type: ignore[attr-defined]

        _impl = _fast
        backend_name = "fast"
    except ImportError:
        if _choice == "fast":
            raise

eval_terms = _impl.eval_terms
eval_terms_batch = _impl.eval_terms_batch

__all__ = ["eval_terms", "eval_terms_batch", "backend_name"]
