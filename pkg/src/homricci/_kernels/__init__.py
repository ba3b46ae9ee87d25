"""Kernel backend selection: compiled core when built, numpy fallback otherwise.

Set ``HOMRICCI_PURE_PYTHON=1`` to skip the compiled extension.  Both backends
expose ``scalar_value`` and ``value_and_ricci`` over identical flat arrays;
see ``_py.py`` for the contract.
"""

from __future__ import annotations

import os

from . import _py

if os.environ.get("HOMRICCI_PURE_PYTHON", "") not in ("", "0"):
    impl = _py
    BACKEND = "python"
else:
    try:
        from . import _core as impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        impl = _py
        BACKEND = "python"


def get_backend(name: str | None = None):
    """Return a kernel module by name ("compiled"/"python"); default: selected."""
    if name is None:
        return impl
    if name == "python":
        return _py
    if name == "compiled":
        from . import _core  # raises ImportError when not built

        return _core
    raise ValueError(f"unknown kernel backend {name!r}")


scalar_value = impl.scalar_value
value_and_ricci = impl.value_and_ricci
