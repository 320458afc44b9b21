"""Forest-kernel backend selection: compiled extension when available, pure numpy otherwise.

Set ``USEA_KERNEL=pure`` or ``USEA_KERNEL=compiled`` to force a backend at import time.
"""

from __future__ import annotations

import os

from . import _pytree

try:
    from . import _ctree
except ImportError:  # extension not built: fall back to the numpy tree builder
    _ctree = None

_BACKENDS = {"pure": _pytree}
if _ctree is not None:
    _BACKENDS["compiled"] = _ctree


def available_backends() -> tuple[str, ...]:
    return tuple(_BACKENDS)


def get_backend(name: str):
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    return _BACKENDS[name]


def _select():
    forced = os.environ.get("USEA_KERNEL", "auto").lower()
    if forced in ("auto", ""):
        return _BACKENDS.get("compiled", _pytree)
    return get_backend(forced)


_ACTIVE = _select()


def active_backend():
    return _ACTIVE


def active_backend_name() -> str:
    return _ACTIVE.NAME
