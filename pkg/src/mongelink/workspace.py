"""Linear-space buffers shared by every phase of a solve."""
from __future__ import annotations

from typing import Optional

import numpy as np

from . import kernels


class CellAccountant:
    """Tracks auxiliary buffer cells (one cell = one 8-byte slot)."""

    def __init__(self):
        self.current = 0
        self.peak = 0
        self._live: dict[str, int] = {}

    def alloc(self, label: str, cells: int) -> None:
        if label in self._live:
            raise RuntimeError(f"buffer {label!r} allocated twice")
        self._live[label] = cells
        self.current += cells
        self.peak = max(self.peak, self.current)

    def free(self, label: str) -> None:
        self.current -= self._live.pop(label)

    def __repr__(self):
        return f"CellAccountant(current={self.current}, peak={self.peak})"


class DpWorkspace:
    """The global buffers of a solve, all of size ``N+1``.

    ``f``/``fbar``  two consecutive DP layers (written by ``pbf``)
    ``h``           out-edge lengths of the contracted root
    ``F``/``parent`` shortest-path-tree values and parent selection
    ``scratch``     SMAWK argmin slots plus reduce stacks (3 cells per row)

    Buffers are numpy arrays for the compiled kernels and lists for the
    pure-Python ones; every phase reads and writes them by node index.
    """

    def __init__(self, N: int, mode: str = "int", backend: Optional[str] = None,
                 accountant: Optional[CellAccountant] = None):
        self.N = N
        self.mode = mode
        self.backend = kernels.resolve(backend)
        self.accountant = accountant if accountant is not None else CellAccountant()
        self.scalar = int if mode == "int" else float
        size = N + 1
        self.f = self._num(size)
        self.fbar = self._num(size)
        self.h = self._num(size)
        self.F = self._num(size)
        self.parent = self._idx(size)
        self.scratch = self._idx(3 * size)
        self.accountant.alloc(f"ws{id(self)}", 8 * size)
        self.f_range: Optional[tuple] = None
        self.fbar_range: Optional[tuple] = None
        self.pbf_key: Optional[tuple] = None

    @classmethod
    def for_oracle(cls, oracle, backend: Optional[str] = None,
                   accountant: Optional[CellAccountant] = None) -> "DpWorkspace":
        backend = kernels.backend_for(oracle, backend)
        return cls(oracle.N, oracle.mode, backend, accountant)

    @property
    def cells(self) -> int:
        return 8 * (self.N + 1)

    def _num(self, size):
        if self.backend == "compiled":
            return np.zeros(size, dtype=np.int64 if self.mode == "int" else np.float64)
        return [self.scalar(0)] * size

    def _idx(self, size):
        if self.backend == "compiled":
            return np.zeros(size, dtype=np.int64)
        return [0] * size

    def swap_layers(self) -> None:
        self.f, self.fbar = self.fbar, self.f

    def invalidate(self) -> None:
        self.f_range = self.fbar_range = self.pbf_key = None

    def release(self) -> None:
        self.accountant.free(f"ws{id(self)}")
