# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Same signatures as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef int64_t _LIMIT = (<int64_t>1) << 62


cdef int64_t _merge_count(int64_t* src, int64_t* dst, Py_ssize_t n) nogil:
    cdef int64_t count = 0
    cdef Py_ssize_t width = 1, lo, mid, hi, i, j, k
    cdef int64_t* tmp
    while width < n:
        lo = 0
        while lo < n:
            mid = lo + width
            if mid > n:
                mid = n
            hi = lo + 2 * width
            if hi > n:
                hi = n
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if src[i] <= src[j]:
                    dst[k] = src[i]
                    i += 1
                else:
                    dst[k] = src[j]
                    j += 1
                    count += mid - i
                k += 1
            while i < mid:
                dst[k] = src[i]
                i += 1
                k += 1
            while j < hi:
                dst[k] = src[j]
                j += 1
                k += 1
            lo += 2 * width
        tmp = src
        src = dst
        dst = tmp
        width *= 2
    return count


def inv_count_merge(seq):
    cdef cnp.int64_t[::1] arr = np.ascontiguousarray(seq, dtype=np.int64)
    cdef Py_ssize_t n = arr.shape[0]
    if n < 2:
        return 0
    cdef int64_t* a = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t* w = <int64_t*> malloc(n * sizeof(int64_t))
    cdef Py_ssize_t i
    cdef int64_t res
    if a == NULL or w == NULL:
        free(a)
        free(w)
        raise MemoryError()
    for i in range(n):
        a[i] = arr[i]
    res = _merge_count(a, w, n)
    free(a)
    free(w)
    return int(res)


cdef int64_t _gcd(int64_t x, int64_t y) nogil:
    cdef int64_t t
    while y:
        t = x % y
        x = y
        y = t
    return x


def inversions_all_units(int64_t b):
    units = []
    vals = []
    if b == 1:
        return np.asarray([1], dtype=np.int64), np.asarray([0], dtype=np.int64)
    cdef Py_ssize_t n = b - 1
    cdef int64_t* a = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t* w = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t u, x, cnt
    if a == NULL or w == NULL:
        free(a)
        free(w)
        raise MemoryError()
    try:
        for u in range(1, b + 1):
            if _gcd(u, b) != 1:
                continue
            for x in range(n):
                a[x] = (u * (x + 1)) % b
            cnt = _merge_count(a, w, n)
            units.append(u)
            vals.append(cnt)
    finally:
        free(a)
        free(w)
    return np.asarray(units, dtype=np.int64), np.asarray(vals, dtype=np.int64)


def sparse_eval_modp(exps, coeffs, int64_t m, int64_t p, table):
    cdef cnp.int64_t[::1] e = np.ascontiguousarray(exps, dtype=np.int64)
    cdef cnp.int64_t[::1] c = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef cnp.int64_t[::1] t = np.ascontiguousarray(table, dtype=np.int64)
    cdef Py_ssize_t i, n = e.shape[0]
    cdef int64_t acc = 0
    with nogil:
        for i in range(n):
            acc = (acc + c[i] * t[e[i] % m]) % p
    return int(acc)


def fold(exps, coeffs, int64_t m):
    c_arr = np.asarray(coeffs)
    if c_arr.dtype == object:
        # oversized coefficients: stay in Python integers
        out = [0] * m
        for ex, cf in zip(exps, coeffs):
            out[int(ex) % m] += int(cf)
        return out
    cdef cnp.int64_t[::1] e = np.ascontiguousarray(exps, dtype=np.int64)
    cdef cnp.int64_t[::1] c = np.ascontiguousarray(c_arr, dtype=np.int64)
    res = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t[::1] r = res
    cdef Py_ssize_t i, n = e.shape[0]
    with nogil:
        for i in range(n):
            r[e[i] % m] += c[i]
    return res.tolist()


def _cyc_reduce_int64(vec, phi):
    cdef cnp.int64_t[::1] r = np.array(vec, dtype=np.int64)
    cdef cnp.int64_t[::1] f = np.ascontiguousarray(phi, dtype=np.int64)
    cdef Py_ssize_t d = f.shape[0] - 1
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t i, j, base
    cdef int64_t q, v
    cdef bint overflow = False
    # nonzero positions of phi (excluding the leading 1)
    cdef Py_ssize_t nnz = 0
    cdef Py_ssize_t* idx = <Py_ssize_t*> malloc((d + 1) * sizeof(Py_ssize_t))
    if idx == NULL:
        raise MemoryError()
    for j in range(d):
        if f[j] != 0:
            idx[nnz] = j
            nnz += 1
    with nogil:
        for i in range(n - 1, d - 1, -1):
            q = r[i]
            if q == 0:
                continue
            if q >= (<int64_t>1 << 31) or q <= -(<int64_t>1 << 31):
                overflow = True
                break
            base = i - d
            for j in range(nnz):
                v = r[base + idx[j]] - q * f[idx[j]]
                if v >= _LIMIT or v <= -_LIMIT:
                    overflow = True
                    break
                r[base + idx[j]] = v
            if overflow:
                break
            r[i] = 0
    free(idx)
    if overflow:
        raise OverflowError("int64 range exceeded during cyclotomic reduction")
    out = [int(r[i]) for i in range(min(n, d))]
    return out + [0] * (d - len(out))


def cyc_reduce(vec, phi):
    try:
        big = max(abs(int(v)) for v in vec) >= _LIMIT if len(vec) else False
    except TypeError:
        big = True
    if not big and max(abs(int(c)) for c in phi) < (1 << 31):
        try:
            return _cyc_reduce_int64(vec, phi)
        except OverflowError:
            pass
    from dedekind._kernels_py import cyc_reduce as _slow
    return _slow(vec, phi)
