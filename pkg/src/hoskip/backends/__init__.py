"""Backend selection for the numerical kernels.

The compiled extension is preferred when it imports cleanly; the pure-numpy
module is the fallback.  Set ``HOSKIP_BACKEND`` to ``compiled``, ``python``
or ``auto`` (the default) to override.  The active module is re-exported as
``kernels`` and its functions at package level.
"""

from __future__ import annotations

import os
import warnings

from . import pykern

_choice = os.environ.get("HOSKIP_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "compiled", "python"):
    raise ValueError(
        f"HOSKIP_BACKEND must be auto, compiled or python, got {_choice!r}"
    )

if _choice == "python":
    kernels = pykern
else:
    try:
        from . import _fastkern as kernels  # type: ignore[no-redef]
    except ImportError as exc:
        if _choice == "compiled":
            raise ImportError(
                "HOSKIP_BACKEND=compiled but the extension is unavailable: "
                f"{exc}"
            ) from exc
        warnings.warn(
            f"compiled kernels unavailable ({exc}); using the numpy fallback",
            RuntimeWarning,
            stacklevel=2,
        )
        kernels = pykern

BACKEND_NAME = kernels.BACKEND_NAME
deficit_sum = kernels.deficit_sum
segment_change_count = kernels.segment_change_count

__all__ = ["kernels", "pykern", "BACKEND_NAME", "deficit_sum",
           "segment_change_count"]
