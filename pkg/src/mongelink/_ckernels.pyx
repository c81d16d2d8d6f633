# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: SMAWK row minima and shortest-path-tree builders.

Mirror of ``_pykernels``; see there for the calling convention.  Oracles
are evaluated from their parameter arrays directly, so only the
``gap``, ``dense`` and ``sse`` kinds are supported here.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

ctypedef fused num_t:
    int64_t
    double

cdef enum:
    KIND_GAP = 0
    KIND_DENSE = 1
    KIND_SSE = 2

cdef struct Ctx:
    int kind
    void* p0
    void* p1
    void* p2
    Py_ssize_t stride
    Py_ssize_t s
    void* h
    void* base
    Py_ssize_t col_hi
    bint rightmost
    long long evals


cdef class Handle:
    cdef public Py_ssize_t N
    cdef public bint is_float
    cdef int kind
    cdef Py_ssize_t stride
    cdef object keep
    cdef void* p0
    cdef void* p1
    cdef void* p2

    def __init__(self, oracle):
        self.N = oracle.N
        self.is_float = oracle.mode == "float"
        dt = np.float64 if self.is_float else np.int64
        kind = oracle.kind
        if kind == "gap":
            pr = oracle.params
            arrs = [np.ascontiguousarray(pr["g"], dtype=dt),
                    np.ascontiguousarray(pr["a"], dtype=dt),
                    np.ascontiguousarray(pr["b"], dtype=dt)]
            self.kind = KIND_GAP
        elif kind == "dense":
            c = np.ascontiguousarray(oracle.params["c"], dtype=dt)
            self.stride = c.shape[1]
            arrs = [c.reshape(-1)]
            self.kind = KIND_DENSE
        elif kind == "sse":
            if not self.is_float:
                raise ValueError("sse oracles are float-only")
            arrs = [np.ascontiguousarray(oracle.params[name], dtype=np.float64)
                    for name in ["s1", "s2"]]
            self.kind = KIND_SSE
        else:
            raise TypeError(f"oracle kind {kind!r} has no compiled kernel")
        self.keep = arrs
        self.p0 = _data(arrs[0])
        self.p1 = _data(arrs[1]) if len(arrs) > 1 else NULL
        self.p2 = _data(arrs[2]) if len(arrs) > 2 else NULL


cdef inline void* _data(object a):
    return cnp.PyArray_DATA(<cnp.ndarray>a)


cdef void* _buf(object a, bint is_float, bint index=False) except? NULL:
    if a is None:
        return NULL
    cdef cnp.ndarray arr = <cnp.ndarray?>a
    if not cnp.PyArray_IS_C_CONTIGUOUS(arr):
        raise ValueError("buffers must be contiguous")
    if index or not is_float:
        if arr.dtype != np.int64:
            raise TypeError(f"expected int64 buffer, got {arr.dtype}")
    elif arr.dtype != np.float64:
        raise TypeError(f"expected float64 buffer, got {arr.dtype}")
    return cnp.PyArray_DATA(arr)


cdef inline num_t _cell(Ctx* c, num_t lam, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef num_t v
    cdef double t, n
    if i == c.s:
        v = (<num_t*>c.h)[j]
    else:
        c.evals += 1
        if c.kind == KIND_GAP:
            v = (<num_t*>c.p0)[j - i] + (<num_t*>c.p1)[i] + (<num_t*>c.p2)[j]
        elif c.kind == KIND_DENSE:
            v = (<num_t*>c.p0)[i * c.stride + j]
        else:
            if num_t is double:
                n = j - i
                t = (<double*>c.p0)[j - 1] - (<double*>c.p0)[i - 1]
                v = ((<double*>c.p1)[j - 1] - (<double*>c.p1)[i - 1]) - t * t / n
                if v < 0.0:
                    v = 0.0
            else:
                v = 0
    v = v - lam
    if c.base != NULL:
        v = v + (<num_t*>c.base)[i]
    return v


cdef inline Py_ssize_t _hi(Ctx* c, Py_ssize_t j) noexcept nogil:
    return c.col_hi if c.col_hi < j else j - 1


cdef void _level(Ctx* c, num_t lam, Py_ssize_t row0, Py_ssize_t nrows,
                 Py_ssize_t step, Py_ssize_t off, int64_t* cols, Py_ssize_t ncols,
                 Py_ssize_t col_lo, int64_t* stk, int64_t* arg, num_t* val) noexcept nogil:
    # rows of this level: row0 + k*step + off; cols NULL means col_lo + t
    cdef Py_ssize_t t, k, q, j, p, last, hj, top = 0
    cdef int64_t col, best, stop
    cdef num_t a, b, bv, v
    for t in range(ncols):
        col = cols[t] if cols != NULL else col_lo + t
        while top > 0:
            j = row0 + (top - 1) * step + off
            if col > _hi(c, j):
                break
            a = _cell(c, lam, stk[top - 1], j)
            b = _cell(c, lam, col, j)
            if b < a or (c.rightmost and b == a):
                top -= 1
            else:
                break
        if top < nrows:
            stk[top] = col
            top += 1

    if nrows >= 2:
        _level(c, lam, row0, nrows // 2, 2 * step, off + step, stk, top,
               col_lo, stk + top, arg, val)

    p = 0
    last = top - 1
    for k in range(0, nrows, 2):
        q = k * step + off
        j = row0 + q
        stop = arg[q + step] if k + 1 < nrows else stk[last]
        hj = _hi(c, j)
        best = stk[p]
        bv = _cell(c, lam, best, j)
        while stk[p] != stop:
            p += 1
            col = stk[p]
            if col <= hj:
                v = _cell(c, lam, col, j)
                if v < bv or (c.rightmost and v == bv):
                    best = col
                    bv = v
        arg[q] = best
        if val != NULL:
            val[row0 + q] = bv


cdef void _rows(Ctx* c, num_t lam, Py_ssize_t row_lo, Py_ssize_t row_hi,
                Py_ssize_t col_lo, Py_ssize_t col_hi, num_t* val,
                int64_t* out_arg, int64_t* scratch) noexcept nogil:
    cdef Py_ssize_t nrows = row_hi - row_lo + 1, q, top
    if nrows <= 0:
        return
    c.col_hi = col_hi
    top = col_hi if col_hi < row_hi - 1 else row_hi - 1
    _level(c, lam, row_lo, nrows, 1, 0, NULL, top - col_lo + 1, col_lo,
           scratch + nrows, scratch, val)
    if out_arg != NULL:
        for q in range(nrows):
            out_arg[row_lo + q] = scratch[q]


cdef void _wilber(Ctx* c, num_t lam, Py_ssize_t s, Py_ssize_t N, num_t* F,
                  num_t* aux, int64_t* scratch) noexcept nogil:
    cdef Py_ssize_t cc = s, r = s, p, j, j0
    c.base = F
    while cc < N:
        p = 2 * cc - r + 1
        if p > N:
            p = N
        _rows(c, lam, cc + 1, p, r, cc, F, NULL, scratch)
        if p >= cc + 2:
            _rows(c, lam, cc + 2, p, cc + 1, p - 1, aux, NULL, scratch)
            j0 = -1
            for j in range(cc + 2, p + 1):
                if aux[j] < F[j]:
                    j0 = j
                    break
            if j0 >= 0:
                F[j0] = aux[j0]
                r = cc + 1
                cc = j0
                continue
        cc = p


cdef void _dnc(Ctx* c, num_t lam, num_t* F, num_t* aux, int64_t* scratch,
               Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t mid, j
    if hi <= lo:
        return
    mid = (lo + hi) // 2
    _dnc(c, lam, F, aux, scratch, lo, mid)
    _rows(c, lam, mid + 1, hi, lo, mid, aux, NULL, scratch)
    for j in range(mid + 1, hi + 1):
        if aux[j] < F[j]:
            F[j] = aux[j]
    _dnc(c, lam, F, aux, scratch, mid + 1, hi)


cdef void _spt(Ctx* c, num_t lam, Py_ssize_t s, Py_ssize_t N, num_t* F,
               num_t* aux, int64_t* scratch, bint online) noexcept nogil:
    cdef Py_ssize_t j
    F[s] = 0
    if online:
        _wilber(c, lam, s, N, F, aux, scratch)
        return
    c.base = NULL
    _rows(c, lam, s + 1, N, s, s, F, NULL, scratch)
    c.base = F
    _dnc(c, lam, F, aux, scratch, s, N)


cdef Ctx _ctx(Handle hd, Py_ssize_t s, object h, object base, bint rightmost) except *:
    cdef Ctx c
    c.kind = hd.kind
    c.p0 = hd.p0
    c.p1 = hd.p1
    c.p2 = hd.p2
    c.stride = hd.stride
    c.s = s if h is not None else -1
    c.h = _buf(h, hd.is_float)
    c.base = _buf(base, hd.is_float)
    c.col_hi = 0
    c.rightmost = rightmost
    c.evals = 0
    return c


def make_handle(oracle):
    return Handle(oracle)


def row_minima(Handle hd, Py_ssize_t s, h, lam, base, Py_ssize_t row_lo, Py_ssize_t row_hi,
               Py_ssize_t col_lo, Py_ssize_t col_hi, bint rightmost, out_val, out_arg,
               scratch):
    cdef Py_ssize_t nrows = row_hi - row_lo + 1
    if nrows <= 0:
        return 0
    if col_lo > min(col_hi, row_lo - 1):
        raise ValueError(f"row {row_lo} has no feasible column")
    if row_hi > hd.N or col_lo < 0:
        raise IndexError("row/column range outside the graph")
    cdef Ctx c = _ctx(hd, s, h, base, rightmost)
    cdef int64_t* sc = <int64_t*>_buf(scratch, False, True)
    if len(scratch) < 3 * nrows:
        raise ValueError("scratch too small")
    cdef int64_t* oa = <int64_t*>_buf(out_arg, False, True)
    cdef void* ov = _buf(out_val, hd.is_float)
    cdef double lf
    cdef int64_t li
    if hd.is_float:
        lf = lam
        with nogil:
            _rows(&c, lf, row_lo, row_hi, col_lo, col_hi, <double*>ov, oa, sc)
    else:
        li = lam
        with nogil:
            _rows(&c, li, row_lo, row_hi, col_lo, col_hi, <int64_t*>ov, oa, sc)
    return c.evals


def spt_values(Handle hd, Py_ssize_t s, h, lam, F, aux, scratch, bint online=True):
    cdef Ctx c = _ctx(hd, s, h, None, False)
    cdef Py_ssize_t N = hd.N
    if len(F) < N + 1 or len(scratch) < 3 * (N + 1):
        raise ValueError("buffers too small")
    cdef void* pF = _buf(F, hd.is_float)
    # aux is an index-typed buffer reused for values of either type
    cdef void* pA = _buf(aux, False, True)
    cdef int64_t* sc = <int64_t*>_buf(scratch, False, True)
    cdef double lf
    cdef int64_t li
    if hd.is_float:
        lf = lam
        with nogil:
            _spt(&c, lf, s, N, <double*>pF, <double*>pA, sc, online)
    else:
        li = lam
        with nogil:
            _spt(&c, li, s, N, <int64_t*>pF, <int64_t*>pA, sc, online)
    return c.evals


def depth(parent, Py_ssize_t s, Py_ssize_t n):
    cdef int64_t* par = <int64_t*>_buf(parent, False, True)
    cdef Py_ssize_t d = 0
    with nogil:
        while n != s:
            n = par[n]
            d += 1
    return d
