"""Kernel selection: compiled extension if available, pure Python otherwise.

Set the environment variable GPTLAB_PURE_PYTHON=1 to force the fallback.
`set_impl` exists so benchmarks and tests can switch kernels explicitly.
"""

from __future__ import annotations

import os

from gptlab import _ddcore_py

_impl = _ddcore_py
if not os.environ.get("GPTLAB_PURE_PYTHON"):
    try:
        from gptlab import _ddcore_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _ddcore_py


def available_kernels() -> list[str]:
    names = ["python"]
    try:
        from gptlab import _ddcore_cy  # noqa: F401

        names.append("compiled")
    except ImportError:
        pass
    return names


def kernel_name() -> str:
    return _impl.KERNEL_NAME


def set_impl(name: str) -> None:
    global _impl
    if name == "python":
        _impl = _ddcore_py
    elif name == "compiled":
        from gptlab import _ddcore_cy

        _impl = _ddcore_cy
    else:
        raise ValueError(f"unknown kernel {name!r}")


def dd_exact(eq_rows, ineq_rows, dim, budget=None):
    return _impl.dd_exact(eq_rows, ineq_rows, dim, budget)


def dd_approx(eq_rows, ineq_rows, dim, eps, budget=None):
    return _impl.dd_approx(eq_rows, ineq_rows, dim, eps, budget)
