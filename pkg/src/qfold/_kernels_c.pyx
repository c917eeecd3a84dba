# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``qfold._kernels_py``.

Laurent products run in 64-bit arithmetic when a cheap bound proves the
result cannot overflow, and fall back to Python integers otherwise.
Modular elimination uses 128-bit intermediate products.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef long long i64
ctypedef unsigned long long u64

cdef i64 _LIMIT = 1LL << 62


cpdef tuple trim(long val, coeffs):
    cdef Py_ssize_t lo = 0, hi = len(coeffs)
    while lo < hi and not coeffs[lo]:
        lo += 1
    while hi > lo and not coeffs[hi - 1]:
        hi -= 1
    if lo == hi:
        return (0, ())
    return (val + lo, tuple(coeffs[lo:hi]))


cdef object _maxabs(tuple c):
    cdef object m = 0
    cdef object x
    for x in c:
        if x < 0:
            x = -x
        if x > m:
            m = x
    return m


def lp_add(long va, tuple ca, long vb, tuple cb, p):
    if not ca:
        return vb, cb
    if not cb:
        return va, ca
    cdef long v = va if va < vb else vb
    cdef long top = max(va + len(ca), vb + len(cb))
    cdef list out = [0] * (top - v)
    cdef Py_ssize_t k, off
    off = va - v
    for k in range(len(ca)):
        out[off + k] = ca[k]
    off = vb - v
    for k in range(len(cb)):
        out[off + k] = out[off + k] + cb[k]
    if p:
        out = [c % p for c in out]
    return trim(v, out)


def lp_mul(long va, tuple ca, long vb, tuple cb, p):
    if not ca or not cb:
        return 0, ()
    cdef Py_ssize_t na = len(ca), nb = len(cb), j, k, n
    if na < nb:
        va, ca, vb, cb = vb, cb, va, ca
        na, nb = nb, na
    n = na + nb - 1
    cdef object ma = _maxabs(ca)
    cdef object mb = _maxabs(cb)
    cdef i64 *a
    cdef i64 *b
    cdef i64 *o
    cdef list res
    if ma * mb * nb < _LIMIT:
        a = <i64 *> malloc(na * sizeof(i64))
        b = <i64 *> malloc(nb * sizeof(i64))
        o = <i64 *> malloc(n * sizeof(i64))
        try:
            for k in range(na):
                a[k] = ca[k]
            for k in range(nb):
                b[k] = cb[k]
            for k in range(n):
                o[k] = 0
            for j in range(nb):
                if b[j]:
                    for k in range(na):
                        o[j + k] += a[k] * b[j]
            res = [o[k] for k in range(n)]
        finally:
            free(a)
            free(b)
            free(o)
    else:
        res = [0] * n
        for j in range(nb):
            bj = cb[j]
            if bj:
                for k in range(na):
                    res[j + k] += ca[k] * bj
    if p:
        res = [c % p for c in res]
        return trim(va + vb, res)
    return va + vb, tuple(res)


def lp_axpy(long va, tuple ca, c, long shift, long vb, tuple cb, p):
    if not cb or not c:
        return va, ca
    if len(cb) == 1 and not ca:
        x = cb[0] * c
        if p:
            x %= p
        return (vb + shift, (x,)) if x else (0, ())
    return lp_add(va, ca, vb + shift, tuple([x * c for x in cb]), p)


cdef inline u64 _mulmod(u64 a, u64 b, u64 m):
    return <u64> ((<u128> a * b) % m)


def echelon_mod(rows, modulus, Py_ssize_t ncols, Py_ssize_t limit=-1):
    cdef u64 m = modulus
    cdef u64 *r = <u64 *> malloc((ncols + 1) * sizeof(u64))
    cdef list basis = []     # list of (col, pointer-as-bytes)
    cdef list pivots = []
    cdef list used = []
    cdef dict store = {}
    cdef Py_ssize_t k, lead, idx = -1, t
    cdef u64 x, inv
    cdef u64 *b
    cdef bytearray buf
    cdef unsigned char[:] view
    try:
        for row in rows:
            idx += 1
            for k in range(ncols):
                r[k] = <u64> (row[k] % modulus)
            for t in range(len(pivots)):
                col = pivots[t]
                x = r[col]
                if x:
                    buf = store[col]
                    b = <u64 *> (<char *> buf)
                    for k in range(col, ncols):
                        if b[k]:
                            r[k] = (r[k] + m - _mulmod(x, b[k], m)) % m
            lead = -1
            for k in range(ncols):
                if r[k]:
                    lead = k
                    break
            if lead < 0:
                continue
            inv = pow(int(r[lead]), int(m - 2), int(m))
            buf = bytearray((ncols + 1) * sizeof(u64))
            b = <u64 *> (<char *> buf)
            for k in range(ncols):
                b[k] = _mulmod(r[k], inv, m)
            store[lead] = buf
            pivots.append(lead)
            used.append(idx)
            if len(pivots) == limit:
                break
    finally:
        free(r)
    return len(pivots), pivots, used
