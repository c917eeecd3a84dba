"""Pure-Python reference kernels.

Dense Laurent polynomials travel through these functions as a pair
``(val, coeffs)`` where ``coeffs`` is a tuple of ints whose first and last
entries are nonzero and ``val`` is the exponent of ``coeffs[0]``.  The zero
polynomial is ``(0, ())``.  A modulus ``p`` of ``0`` means integer
coefficients.

The compiled module ``_kernels_c`` exports the same names with the same
semantics; ``qfold.kernels`` picks one at import time.
"""


def trim(val, coeffs):
    lo = 0
    hi = len(coeffs)
    while lo < hi and not coeffs[lo]:
        lo += 1
    while hi > lo and not coeffs[hi - 1]:
        hi -= 1
    if lo == hi:
        return 0, ()
    return val + lo, tuple(coeffs[lo:hi])


def lp_add(va, ca, vb, cb, p):
    if not ca:
        return vb, cb
    if not cb:
        return va, ca
    v = va if va < vb else vb
    top = max(va + len(ca), vb + len(cb))
    out = [0] * (top - v)
    off = va - v
    for k, c in enumerate(ca):
        out[off + k] = c
    off = vb - v
    for k, c in enumerate(cb):
        out[off + k] += c
    if p:
        out = [c % p for c in out]
    return trim(v, out)


def lp_mul(va, ca, vb, cb, p):
    if not ca or not cb:
        return 0, ()
    if len(ca) < len(cb):
        va, ca, vb, cb = vb, cb, va, ca
    out = [0] * (len(ca) + len(cb) - 1)
    for j, b in enumerate(cb):
        if b:
            for k, a in enumerate(ca):
                out[j + k] += a * b
    if p:
        out = [c % p for c in out]
        return trim(va + vb, out)
    return va + vb, tuple(out)


def lp_axpy(va, ca, c, shift, vb, cb, p):
    """Return (a + c * q^shift * b) for an integer scalar c."""
    if not cb or not c:
        return va, ca
    if len(cb) == 1:
        vb2 = vb + shift
        if not ca:
            x = cb[0] * c
            if p:
                x %= p
            return (vb2, (x,)) if x else (0, ())
    scaled = tuple(x * c for x in cb)
    return lp_add(va, ca, vb + shift, scaled, p)


def echelon_mod(rows, modulus, ncols, limit=-1):
    """Incremental row echelon form over Z/modulus (modulus prime).

    ``rows`` is an iterable of integer lists of length ``ncols``.  Returns
    ``(rank, pivots, used)`` where ``pivots`` lists the pivot column of each
    basis row in insertion order and ``used`` lists the indices of the input
    rows that increased the rank.  Stops early once ``rank == limit``.
    """
    basis = {}  # pivot column -> normalized row
    pivots = []
    used = []
    for idx, row in enumerate(rows):
        r = [x % modulus for x in row]
        for col in pivots:
            x = r[col]
            if x:
                b = basis[col]
                for k in range(col, ncols):
                    if b[k]:
                        r[k] = (r[k] - x * b[k]) % modulus
        lead = -1
        for k in range(ncols):
            if r[k]:
                lead = k
                break
        if lead < 0:
            continue
        inv = pow(r[lead], modulus - 2, modulus)
        r = [(x * inv) % modulus for x in r]
        basis[lead] = r
        pivots.append(lead)
        used.append(idx)
        if len(pivots) == limit:
            break
    return len(pivots), pivots, used
