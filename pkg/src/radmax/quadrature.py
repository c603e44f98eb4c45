"""Quadrature settings and kernel backend selection.

The compiled backend (``radmax._kernels``) is used when it imports;
``RADMAX_PURE=1`` forces the pure-Python fallback.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels_py

if os.environ.get("RADMAX_PURE") == "1":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND


class QuadratureError(RuntimeError):
    """Adaptive refinement hit its depth limit before meeting the tolerance."""

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


@dataclass(frozen=True)
class QuadratureSpec:
    tol: float = 1e-9
    nodes: int = 16
    max_depth: int = 40

    def __post_init__(self):
        if not 0 < self.tol <= 1e-4:
            raise ValueError("tolerance must lie in (0, 1e-4]")
        if self.nodes < 8:
            raise ValueError("need at least 8 nodes per panel")

    @property
    def rule(self):
        return gauss_legendre(self.nodes)


@lru_cache(maxsize=16)
def gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return np.ascontiguousarray(x), np.ascontiguousarray(w)


def use_backend(name: str):
    """Return the kernel module for ``"python"`` or ``"cython"`` (for benchmarks/tests)."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
