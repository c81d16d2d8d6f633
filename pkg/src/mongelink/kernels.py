"""Kernel backend selection.

The compiled extension is used when it imported cleanly, unless the
environment variable ``MONGELINK_PURE`` is set.  Oracles of kind
``callable`` always run on the pure-Python kernels.
"""
from __future__ import annotations

import os
from typing import Optional

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

COMPILED_KINDS = ("gap", "dense", "sse")

_IMPLS = {"python": _pykernels}
if _ckernels is not None:
    _IMPLS["compiled"] = _ckernels

DEFAULT = "compiled" if _ckernels is not None and not os.environ.get("MONGELINK_PURE") else "python"


def available() -> list[str]:
    return sorted(_IMPLS)


def resolve(backend: Optional[str]) -> str:
    name = backend or DEFAULT
    if name not in _IMPLS:
        raise ValueError(f"backend {name!r} not available (have {available()})")
    return name


def backend_for(oracle, backend: Optional[str] = None) -> str:
    name = resolve(backend)
    if name == "compiled" and oracle.kind not in COMPILED_KINDS:
        return "python"
    return name


def impl(name: str):
    return _IMPLS[name]


def handle(oracle, backend: str):
    """Kernel handle for ``oracle``, cached on the oracle per backend."""
    h = oracle._handles.get(backend)
    if h is None:
        h = oracle._handles[backend] = _IMPLS[backend].make_handle(oracle)
    return h


def _check_lam(view) -> None:
    lam = view.lam
    if view.base.mode == "int" and lam != int(lam):
        raise TypeError(f"integer-mode view needs an integral shift, got {lam!r}")


def row_minima(ws, view, base, row_lo, row_hi, col_lo, col_hi, rightmost,
               out_val, out_arg) -> int:
    """Run one SMAWK pass on ``view`` through the workspace's backend.

    Minimizes ``base[i] + cost(i, j)`` over ``i in [col_lo : min(col_hi, j-1)]``
    for ``j in [row_lo : row_hi]``; base-oracle evaluations are added to the
    oracle's counter and returned.
    """
    _check_lam(view)
    o = view.base
    k = _IMPLS[ws.backend]
    n = k.row_minima(handle(o, ws.backend), view.override_root, view.h, view.lam,
                     base, row_lo, row_hi, col_lo, col_hi, rightmost, out_val,
                     out_arg, ws.scratch)
    o.evals += n
    return n


def spt_values(ws, view, online: bool = True) -> int:
    _check_lam(view)
    o = view.base
    k = _IMPLS[ws.backend]
    n = k.spt_values(handle(o, ws.backend), view.s,
                     view.h, view.lam, ws.F, ws.parent, ws.scratch, online)
    o.evals += n
    return n
