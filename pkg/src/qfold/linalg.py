"""Exact linear algebra over Laurent polynomial rings.

Three tools:

* ``rank_at`` -- rank after specializing q to a point of F_P, P = 2^61 - 1.
  Specialization can only lower the rank, so it certifies lower bounds.
* ``fraction_free_rank`` -- Bareiss elimination over Z[q] or F_p[q].
* ``series_solve`` -- solve G a = r for a Gram matrix G congruent to the
  identity modulo q, degree by degree in q.
"""

from .kernels import echelon_mod
from .qarith import LaurentPoly, laurent_series

MERSENNE61 = (1 << 61) - 1
SPECIAL_POINTS = (1234567891, 987654321987, 31415926535)


def specialize_row(row, t, modulus=MERSENNE61):
    t_inv = pow(t, modulus - 2, modulus)
    return [x.eval_mod(t, modulus, t_inv) if isinstance(x, LaurentPoly) else x % modulus for x in row]


def rank_at(rows, ncols, t=SPECIAL_POINTS[0], modulus=MERSENNE61, limit=-1):
    """Rank of a Laurent matrix specialized at q = t mod ``modulus``.

    Returns ``(rank, used_rows)``.  ``rows`` may be a generator.
    """
    t_inv = pow(t, modulus - 2, modulus)

    def gen():
        for row in rows:
            if isinstance(row, dict):
                dense = [0] * ncols
                for k, x in row.items():
                    dense[k] = x.eval_mod(t, modulus, t_inv)
                yield dense
            else:
                yield [x.eval_mod(t, modulus, t_inv) for x in row]

    rank, _piv, used = echelon_mod(gen(), modulus, ncols, limit)
    return rank, used


def _poly_rows(matrix, p):
    """Shift each row so all entries are polynomials; returns dense lists."""
    out = []
    for row in matrix:
        vals = [x.val for x in row if x.coeffs]
        if not vals:
            out.append([[] for _ in row])
            continue
        lo = min(vals)
        dense_row = []
        for x in row:
            if not x.coeffs:
                dense_row.append([])
            else:
                dense_row.append([0] * (x.val - lo) + list(x.coeffs))
        out.append(dense_row)
    return out


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    if p:
        out = [c % p for c in out]
    while out and not out[-1]:
        out.pop()
    return out


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)]
    if p:
        out = [c % p for c in out]
    while out and not out[-1]:
        out.pop()
    return out


def _pdiv_exact(a, b, p):
    from .qarith import _poly_exact_div
    if not a:
        return []
    q = _poly_exact_div(a, b, p)
    if q is None:
        raise ArithmeticError("Bareiss division was not exact")
    while q and not q[-1]:
        q.pop()
    return q


def fraction_free_rank(matrix, p: int = 0) -> int:
    """Exact rank over Q(q) (``p == 0``) or F_p(q) by Bareiss elimination.

    Pivot rule: in each column take the first remaining row with a nonzero
    entry of least degree.
    """
    m = _poly_rows(matrix, p)
    if p:
        m = [[[c % p for c in e] for e in row] for row in m]
        for row in m:
            for e in row:
                while e and not e[-1]:
                    e.pop()
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    prev = [1]
    rows = list(range(nrows))
    for col in range(ncols):
        cand = [r for r in rows[rank:] if m[r][col]]
        if not cand:
            continue
        piv = min(cand, key=lambda r: (len(m[r][col]), rows.index(r)))
        k = rows.index(piv)
        rows[rank], rows[k] = rows[k], rows[rank]
        pr = rows[rank]
        pv = m[pr][col]
        for r in rows[rank + 1:]:
            e = m[r][col]
            for c in range(col + 1, ncols):
                val = _psub(_pmul(pv, m[r][c], p), _pmul(e, m[pr][c], p), p)
                m[r][c] = _pdiv_exact(val, prev, p)
            m[r][col] = []
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def series_solve(gram_num, rhs_num, delta: LaurentPoly, hi: int):
    """Solve (gram_num / delta) a = (rhs_num / delta) as power series.

    ``gram_num`` is a square list of LaurentPoly numerators whose quotient by
    ``delta`` is congruent to the identity mod q.  Returns a list of
    exponent -> coefficient dicts holding every coefficient of the solution
    of exponent <= ``hi``.
    """
    n = len(gram_num)
    if not n:
        return []
    lo = None
    rser = []
    for r in rhs_num:
        s = laurent_series(r, delta, hi) if r.coeffs else {}
        rser.append(s)
        if s:
            m = min(s)
            lo = m if lo is None else min(lo, m)
    if lo is None:
        return [{} for _ in range(n)]
    span = hi - lo
    gser = []
    for i in range(n):
        row = []
        for j in range(n):
            e = gram_num[i][j]
            s = laurent_series(e, delta, span) if e.coeffs else {}
            if s and min(s) < 0:
                raise ArithmeticError("Gram matrix has a pole at q = 0")
            want = 1 if i == j else 0
            if s.get(0, 0) != want:
                raise ArithmeticError("Gram matrix is not the identity at q = 0")
            row.append(s)
        gser.append(row)
    # nonzero off-constant terms of G, grouped by degree
    shifted = {}
    for i in range(n):
        for j in range(n):
            for e, c in gser[i][j].items():
                if e > 0:
                    shifted.setdefault(e, []).append((i, j, c))
    sol = [dict() for _ in range(n)]
    for deg in range(lo, hi + 1):
        vals = [rser[i].get(deg, 0) for i in range(n)]
        for k, entries in shifted.items():
            src = deg - k
            if src < lo:
                continue
            for i, j, c in entries:
                x = sol[j].get(src)
                if x:
                    vals[i] -= c * x
        for i in range(n):
            if vals[i]:
                sol[i][deg] = vals[i]
    return sol
