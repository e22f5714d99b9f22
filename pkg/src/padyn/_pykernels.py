"""Pure-Python versions of the integer kernels.

These are the reference implementations; ``_ckernels.pyx`` must agree with
them bit for bit.
"""

INF_VAL = 1 << 62


def ival(n, p):
    """Return the exponent of ``p`` in the nonzero integer ``n``."""
    if n < 0:
        n = -n
    if p == 2:
        return (n & -n).bit_length() - 1
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def ival_or_inf(n, p):
    """``ival`` that maps 0 to ``INF_VAL``."""
    if n == 0:
        return INF_VAL
    return ival(n, p)


def series_mul(xs, ys, cap, p, modulus):
    """Truncated convolution of two integer coefficient lists.

    Returns ``(zs, tail)`` where ``zs[k] = sum(xs[i]*ys[k-i]) % modulus`` for
    ``k <= cap`` and ``tail`` is the smallest p-adic valuation among the
    dropped coefficients ``k > cap`` (reduced mod ``modulus``), or ``INF_VAL``
    when nothing nonzero was dropped.
    """
    nx = len(xs)
    ny = len(ys)
    top = nx + ny - 2
    out = []
    tail = INF_VAL
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


def min_val(xs, p):
    """Smallest valuation over the nonzero entries of ``xs`` (``INF_VAL`` if all zero)."""
    best = INF_VAL
    for x in xs:
        if x:
            v = ival(x, p)
            if v < best:
                best = v
    return best
