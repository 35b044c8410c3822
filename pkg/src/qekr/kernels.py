"""Batch rank kernels over F_q.

Subspaces are packed into a zero-padded ``(N, n, n)`` uint8 array of RREF
rows plus a ``dims`` vector.  The kernels compute ``dim(x ∩ y)`` for many
pairs at once as ``dim x + dim y - rank([x; y])``, with field arithmetic done
through the lookup tables of :class:`qekr.gfspace.FiniteField`.

Two interchangeable paths exist: a numba-compiled loop nest and a vectorised
numpy elimination that processes a whole batch of stacked matrices per
column.  ``QEKR_DISABLE_NUMBA=1`` selects the numpy path.
"""

from __future__ import annotations

import numpy as np

from ._accel import HAS_NUMBA, njit

_CHUNK = 1 << 15

if HAS_NUMBA:
    from numba import prange
else:  # pragma: no cover - exercised only with numba disabled
    prange = range


@njit(cache=True)
def _stacked_rank(work, add, mul, neg, inv):
    rows, cols = work.shape
    rank = 0
    for c in range(cols):
        piv = -1
        for r in range(rank, rows):
            if work[r, c] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(cols):
                tmp = work[rank, j]
                work[rank, j] = work[piv, j]
                work[piv, j] = tmp
        s = inv[work[rank, c]]
        for j in range(cols):
            work[rank, j] = mul[s, work[rank, j]]
        for r in range(rank + 1, rows):
            f = work[r, c]
            if f != 0:
                for j in range(cols):
                    work[r, j] = add[work[r, j], neg[mul[f, work[rank, j]]]]
        rank += 1
        if rank == rows:
            break
    return rank


@njit(cache=True, parallel=True)
def _cross_dims_numba(A, da, B, db, add, mul, neg, inv, out):
    na = A.shape[0]
    nb = B.shape[0]
    n = A.shape[2]
    for i in prange(na):
        work = np.empty((2 * n, n), dtype=np.uint8)
        ri = da[i]
        for j in range(nb):
            rj = db[j]
            if ri == 0 or rj == 0:
                out[i, j] = 0
                continue
            for r in range(ri):
                for c in range(n):
                    work[r, c] = A[i, r, c]
            for r in range(rj):
                for c in range(n):
                    work[ri + r, c] = B[j, r, c]
            out[i, j] = ri + rj - _stacked_rank(work[: ri + rj], add, mul, neg, inv)


def _batch_rank_numpy(M, add, mul, neg, inv):
    """Ranks of a stack of matrices ``M`` of shape (P, R, C); ``M`` is clobbered."""
    P, R, C = M.shape
    rank = np.zeros(P, dtype=np.int64)
    rows = np.arange(R)
    for c in range(C):
        cand = (M[:, :, c] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.flatnonzero(has)
        r0 = rank[b]
        p = cand[b].argmax(axis=1)
        top = M[b, r0].copy()
        M[b, r0] = M[b, p]
        M[b, p] = top
        pr = mul[inv[M[b, r0, c]][:, None], M[b, r0]]
        M[b, r0] = pr
        f = M[b, :, c]
        f = np.where(rows[None, :] > r0[:, None], f, 0).astype(np.uint8)
        M[b] = add[M[b], neg[mul[f[:, :, None], pr[:, None, :]]]]
        rank[b] += 1
    return rank


def _cross_dims_numpy(A, da, B, db, add, mul, neg, inv, out):
    na, nb = A.shape[0], B.shape[0]
    n = A.shape[2]
    ii, jj = np.meshgrid(np.arange(na), np.arange(nb), indexing="ij")
    ii = ii.ravel()
    jj = jj.ravel()
    flat = out.reshape(-1)
    for start in range(0, ii.size, _CHUNK):
        i = ii[start : start + _CHUNK]
        j = jj[start : start + _CHUNK]
        stack = np.concatenate([A[i], B[j]], axis=1)
        ranks = _batch_rank_numpy(stack, add, mul, neg, inv)
        flat[start : start + _CHUNK] = da[i] + db[j] - ranks


def cross_intersection_dims(A, da, B, db, tables, backend: str | None = None):
    """Matrix of ``dim(a ∩ b)`` for packed subspace stacks ``A`` and ``B``.

    ``tables`` is ``(add, mul, neg, inv)``.  ``backend`` forces ``"numba"`` or
    ``"numpy"``; by default numba is used whenever it is importable.
    """
    add, mul, neg, inv = tables
    da = np.ascontiguousarray(da, dtype=np.int64)
    db = np.ascontiguousarray(db, dtype=np.int64)
    out = np.zeros((A.shape[0], B.shape[0]), dtype=np.int64)
    if A.shape[0] == 0 or B.shape[0] == 0:
        return out
    if backend is None:
        backend = "numba" if HAS_NUMBA else "numpy"
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable")
        _cross_dims_numba(A, da, B, db, add, mul, neg, inv, out)
    elif backend == "numpy":
        _cross_dims_numpy(A, da, B, db, add, mul, neg, inv, out)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return out
