"""Backend selection for the interference kernel.

The compiled extension is used when importable. Set ``QRCS_PURE_PYTHON=1``
to force the numpy fallback.
"""
import os

from . import _fallback

BACKEND = "python"
interference_batch = _fallback.interference_batch

if not os.environ.get("QRCS_PURE_PYTHON"):
    try:
        from ._kernels import interference_batch  # noqa: F811
        BACKEND = "compiled"
    except ImportError:
        pass


def default_threads():
    return os.cpu_count() or 1

__all__ = ["BACKEND", "interference_batch", "default_threads"]
