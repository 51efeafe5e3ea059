"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python kernels when
it is missing.  Set ``BIGEN_BACKEND=python`` (or ``c``) to force a choice,
e.g. for benchmarking the two against each other.
"""

from __future__ import annotations

import os

_forced = os.environ.get("BIGEN_BACKEND", "").lower()

if _forced in ("python", "py"):
    from bigen import _pykernels as _impl
elif _forced == "c":
    from bigen import _ckernels as _impl  # noqa: F401  (ImportError is the answer)
elif _forced:
    raise ValueError(f"BIGEN_BACKEND must be 'c' or 'python', not {_forced!r}")
else:
    try:
        from bigen import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from bigen import _pykernels as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND_NAME

pgg_kernel = _impl.pgg_kernel
mppl_kernel = _impl.mppl_kernel
mdc_kernel = _impl.mdc_kernel
