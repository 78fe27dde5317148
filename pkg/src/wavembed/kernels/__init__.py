"""Hot-loop kernels with a compiled core and a pure-numpy fallback.

The compiled extension is used when importable; set WAVEMBED_BACKEND=numpy
to force the fallback. ``BACKEND`` names whichever implementation won.
"""

from __future__ import annotations

import os

from . import _numpy

_impl = _numpy
if os.environ.get("WAVEMBED_BACKEND", "").lower() != "numpy":
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _numpy

BACKEND = _impl.NAME

wave_planes = _impl.wave_planes
wave_planes_grad = _impl.wave_planes_grad
modulus = _impl.modulus
modulus_grad = _impl.modulus_grad


def available_backends() -> list[str]:
    """Names of the kernel implementations importable in this environment."""
    names = ["numpy"]
    try:
        from . import _native  # noqa: F401
    except ImportError:
        pass
    else:
        names.insert(0, "native")
    return names


def get_backend(name: str):
    """Return the kernel module for ``name`` ('native' or 'numpy')."""
    if name == "numpy":
        return _numpy
    if name == "native":
        from . import _native

        return _native
    raise ValueError(f"unknown backend {name!r}")
