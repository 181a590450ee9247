"""Kernel selection: compiled extension if available, numpy fallback otherwise.

Set SPOTVOL_NO_NATIVE=1 to force the numpy reference implementation.
"""

import os

from . import _reference

if os.environ.get("SPOTVOL_NO_NATIVE"):
    _impl = _reference
    HAVE_NATIVE = False
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
        HAVE_NATIVE = True
    except ImportError:
        _impl = _reference
        HAVE_NATIVE = False

preaverage_core = _impl.preaverage_core
heston_euler = _impl.heston_euler
reference = _reference

__all__ = ["preaverage_core", "heston_euler", "reference", "HAVE_NATIVE"]
