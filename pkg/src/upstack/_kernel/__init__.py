"""Backend selection for the derivation-search kernel.

The compiled backend is preferred when its extension module importable;
UPSTACK_PURE=1 forces the pure-Python twin. Both expose the same
search_derivation function and return identical results.
"""

from __future__ import annotations

import os

from .membership_py import EXHAUSTED, FOUND, OVER_BUDGET

if os.environ.get("UPSTACK_PURE"):
    from .membership_py import search_derivation

    BACKEND = "python"
else:
    try:
        from .membership_cy import search_derivation  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from .membership_py import search_derivation  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["BACKEND", "EXHAUSTED", "FOUND", "OVER_BUDGET", "search_derivation"]
