# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the integer kernels in ``_pykernels``."""

cdef long long INF_VAL_C = 1LL << 62
INF_VAL = INF_VAL_C


cdef inline long long _ival_small(unsigned long long n, unsigned long long p):
    cdef long long k = 0
    if p == 2:
        while (n & 1ULL) == 0:
            n >>= 1
            k += 1
        return k
    while n % p == 0:
        n //= p
        k += 1
    return k


cpdef long long ival(object n, object p):
    cdef long long k = 0
    cdef unsigned long long nn, pp
    if n < 0:
        n = -n
    pp = p
    if n.bit_length() <= 63:
        nn = n
        return _ival_small(nn, pp)
    if pp == 2:
        return (n & -n).bit_length() - 1
    while n % p == 0:
        n //= p
        k += 1
    return k


cpdef long long ival_or_inf(object n, object p):
    if n == 0:
        return INF_VAL_C
    return ival(n, p)


def series_mul(list xs, list ys, Py_ssize_t cap, object p, object modulus):
    cdef Py_ssize_t nx = len(xs)
    cdef Py_ssize_t ny = len(ys)
    cdef Py_ssize_t top = nx + ny - 2
    cdef Py_ssize_t k, i, lo, hi
    cdef long long tail = INF_VAL_C
    cdef long long v
    cdef list out = []
    cdef object acc, a
    for k in range(top + 1):
        lo = k - ny + 1
        if lo < 0:
            lo = 0
        hi = k if k < nx - 1 else nx - 1
        acc = 0
        for i in range(lo, hi + 1):
            a = xs[i]
            if a:
                acc += a * ys[k - i]
        acc %= modulus
        if k <= cap:
            out.append(acc)
        elif acc:
            v = ival(acc, p)
            if v < tail:
                tail = v
    return out, tail


def min_val(list xs, object p):
    cdef long long best = INF_VAL_C
    cdef long long v
    for x in xs:
        if x:
            v = ival(x, p)
            if v < best:
                best = v
    return best
