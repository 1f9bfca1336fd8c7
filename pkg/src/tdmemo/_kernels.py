"""Span-table fixpoint for the brute-force oracle.

``table[i, l, r]`` is True iff node ``i`` of a compiled grammar derives
tokens ``l..r``.  Two interchangeable backends compute the least fixpoint:
a loop kernel compiled with numba, and a numpy path that treats the
sequence rule as a boolean matrix product.  Set ``TDMEMO_DISABLE_NUMBA=1``
(or run without numba installed) to use the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

TERM, EPS, NT, SEQ, ALT, OPT, STAR = range(7)

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is an optional accelerator
    njit = None

NUMBA_DISABLED = os.environ.get("TDMEMO_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")
HAVE_NUMBA = njit is not None
DEFAULT_BACKEND = "numba" if HAVE_NUMBA and not NUMBA_DISABLED else "numpy"


def _fixpoint_loops(kind, a, b, order, tok, n):
    nodes = kind.shape[0]
    table = np.zeros((nodes, n + 1, n + 1), dtype=np.bool_)
    changed = True
    while changed:
        changed = False
        for idx in range(order.shape[0]):
            i = order[idx]
            k = kind[i]
            x = a[i]
            y = b[i]
            for l in range(n + 1):
                for r in range(l, n + 1):
                    if table[i, l, r]:
                        continue
                    v = False
                    if k == TERM:
                        v = r == l + 1 and tok[l] == x
                    elif k == EPS:
                        v = r == l
                    elif k == NT:
                        v = table[x, l, r]
                    elif k == SEQ:
                        for m in range(l, r + 1):
                            if table[x, l, m] and table[y, m, r]:
                                v = True
                                break
                    elif k == ALT:
                        v = table[x, l, r] or table[y, l, r]
                    elif k == OPT:
                        v = r == l or table[x, l, r]
                    elif k == STAR:
                        if r == l:
                            v = True
                        else:
                            for m in range(l, r + 1):
                                if table[x, l, m] and table[i, m, r]:
                                    v = True
                                    break
                    if v:
                        table[i, l, r] = True
                        changed = True
    return table


_fixpoint_numba = njit(cache=True, nogil=True)(_fixpoint_loops) if HAVE_NUMBA else None


def _fixpoint_numpy(kind, a, b, order, tok, n):
    nodes = kind.shape[0]
    table = np.zeros((nodes, n + 1, n + 1), dtype=np.bool_)
    eye = np.eye(n + 1, dtype=np.bool_)
    # uint8 matmul would wrap at 256 chains; n is far below that
    as_int = np.int32
    changed = True
    while changed:
        changed = False
        for i in order:
            k, x, y = kind[i], a[i], b[i]
            if k == TERM:
                new = np.zeros((n + 1, n + 1), dtype=np.bool_)
                hits = np.flatnonzero(tok == x)
                new[hits, hits + 1] = True
            elif k == EPS:
                new = eye
            elif k == NT:
                new = table[x]
            elif k == SEQ:
                new = (table[x].astype(as_int) @ table[y].astype(as_int)) > 0
            elif k == ALT:
                new = table[x] | table[y]
            elif k == OPT:
                new = eye | table[x]
            else:
                new = eye | ((table[x].astype(as_int) @ table[i].astype(as_int)) > 0)
            merged = table[i] | new
            if not np.array_equal(merged, table[i]):
                table[i] = merged
                changed = True
    return table


def fixpoint(kind, a, b, order, tok, n, backend: str | None = None) -> np.ndarray:
    """Least fixpoint span table; ``order`` fixes the node visiting order."""
    backend = backend or DEFAULT_BACKEND
    args = (np.asarray(kind, np.int64), np.asarray(a, np.int64), np.asarray(b, np.int64),
            np.asarray(order, np.int64), np.asarray(tok, np.int64), int(n))
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return _fixpoint_numba(*args)
    if backend == "numpy":
        return _fixpoint_numpy(*args)
    if backend == "python":
        return _fixpoint_loops(*args)
    raise ValueError(f"unknown backend {backend!r}")
