"""Rewriting spaces for the star-shaped Serre identities.

A tuple ``a = (a_1, ..., a_n)`` stands for ``f^{a_1} g_1 f^{a_2} g_2 ... g_{n-1} f^{a_n}``
where every ``g_k`` is joined to ``f`` with ``r = 1 - a_{fg}``.  The q-Serre
relation between ``f`` and ``g_k`` lets ``f``'s move across ``g_k``:

    a = sum_{j=1}^{r} (-1)^{j-1} [r, j] a(j)

where ``a(j)`` moves ``j`` units from slot ``k`` to slot ``k+1``.  Repeating
this on any slot ``k < n`` holding at least ``r`` units ends in the span of
SE_n(m): tuples whose entries before the last one lie in ``[0, r-1]``.

The matrix version stacks ``m`` such rows, one per commuting ``f`` in a
group; row ``i`` only interacts with the columns in its set ``A_i`` and
slides freely past the others.  Rows never talk to each other, so the normal
form of a matrix is the tensor product of the row normal forms.

All coefficients are Laurent polynomials in ``q`` (the V-space uses
``d = 1``; the translation to U_q^- substitutes ``q -> q^{d}``).
"""

import heapq
import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .cartan import CartanDatum, DiagramAut
from .qarith import ONE, ZERO, LaurentPoly, RatFunc, qbinom, qfact
from .report import Report

MAX_L = 10
MAX_ROWS = 2


class BudgetError(ValueError):
    """Instance is larger than the default combinatorial budget."""


@dataclass(frozen=True)
class IdentityInstance:
    r: int
    n: int
    m: int = 1
    N: int = 0

    @property
    def L(self) -> int:
        # a full row (N = n) is the single-f star shape
        N = self.N or self.n
        return (N - 1) * (self.r - 1) + 1

    def check_budget(self, allow_large: bool = False) -> None:
        if allow_large:
            return
        if self.L > MAX_L:
            raise BudgetError(f"L = {self.L} exceeds the budget {MAX_L}")
        if self.m > MAX_ROWS:
            raise BudgetError(f"m = {self.m} exceeds the budget {MAX_ROWS}")


# ---- vectors -------------------------------------------------------------
def _axpy(acc: dict, vec: dict, c: LaurentPoly) -> None:
    for key, v in vec.items():
        prev = acc.get(key)
        nv = v * c if prev is None else prev + v * c
        if nv:
            acc[key] = nv
        else:
            acc.pop(key, None)


def _key_json(key):
    return [list(x) for x in key] if key and isinstance(key[0], tuple) else list(key)


def vector_to_list(vec: dict) -> list:
    return [{"tuple": _key_json(k), "coeff": str(c)} for k, c in sorted(vec.items()) if c]


def _clean(vec: dict) -> dict:
    return {k: c for k, c in vec.items() if c}


# ---- single rows ---------------------------------------------------------
def potential(a) -> int:
    """Strictly decreases under every rewriting step."""
    n = len(a)
    return sum(x * (n - 1 - i) for i, x in enumerate(a))


def is_normal(a, r: int, interacting=None) -> bool:
    for i in range(len(a) - 1):
        lim = r if interacting is None or (i + 1) in interacting else 1
        if a[i] >= lim:
            return False
    return True


def _moves(a, r, pos, interacting):
    """Terms of one rewriting step at 0-based slot ``pos``."""
    if interacting is not None and (pos + 1) not in interacting:
        b = list(a)
        b[pos] -= 1
        b[pos + 1] += 1
        return [(tuple(b), ONE)]
    out = []
    for j in range(1, r + 1):
        b = list(a)
        b[pos] -= j
        b[pos + 1] += j
        c = qbinom(r, j)
        out.append((tuple(b), c if j % 2 == 1 else -c))
    return out


def _violations(a, r, interacting) -> list:
    out = []
    for i in range(len(a) - 1):
        lim = r if interacting is None or (i + 1) in interacting else 1
        if a[i] >= lim:
            out.append(i)
    return out


@lru_cache(maxsize=None)
def _nf_leftmost(a: tuple, r: int, interacting) -> tuple:
    bad = _violations(a, r, interacting)
    if not bad:
        return ((a, ONE),)
    acc = {}
    for b, c in _moves(a, r, bad[0], interacting):
        _axpy(acc, dict(_nf_leftmost(b, r, interacting)), c)
    return tuple(sorted(acc.items()))


def normal_form_row(a, r: int, interacting=None) -> dict:
    """Leftmost-first normal form of one row.

    ``interacting`` is the set of 1-based columns where the q-Serre rule
    applies; ``None`` means every column ``< n`` interacts.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    a = tuple(int(x) for x in a)
    if min(a, default=0) < 0:
        raise ValueError("entries must be nonnegative")
    inter = None if interacting is None else frozenset(interacting)
    return dict(_nf_leftmost(a, r, inter))


def normal_form_vn(a, r: int) -> dict:
    return normal_form_row(a, r)


def normal_form_strategy(a, r: int, strategy: str = "leftmost", rng=None,
                         interacting=None) -> dict:
    """Worklist reduction with a chosen slot-selection rule.

    Terms are processed in decreasing potential, so each tuple is rewritten
    once with its full accumulated coefficient.  ``strategy`` picks the slot
    among the violating ones: ``leftmost``, ``rightmost`` or ``random``.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    inter = None if interacting is None else frozenset(interacting)
    rng = rng or random.Random(0)
    a = tuple(a)
    vec = {a: ONE}
    heap = [(-potential(a), a)]
    queued = {a}
    out = {}
    while heap:
        _, t = heapq.heappop(heap)
        queued.discard(t)
        c = vec.pop(t, None)
        if not c:
            continue
        bad = _violations(t, r, inter)
        if not bad:
            out[t] = out.get(t, ZERO) + c
            continue
        if strategy == "leftmost":
            pos = bad[0]
        elif strategy == "rightmost":
            pos = bad[-1]
        elif strategy == "random":
            pos = rng.choice(bad)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        for b, k in _moves(t, r, pos, inter):
            vec[b] = vec.get(b, ZERO) + c * k
            if b not in queued:
                queued.add(b)
                heapq.heappush(heap, (-potential(b), b))
    return _clean(out)


def se_tuples(n: int, r: int, total: int):
    """SE_n(total) in lexicographic order."""
    for head in itertools.product(range(r), repeat=n - 1):
        s = sum(head)
        if s <= total:
            yield head + (total - s,)


# ---- the coefficient A(k, s) ---------------------------------------------
def a_coeff(k: int, s: int, r: int) -> LaurentPoly:
    """[s + k - r - 1, s - 1] * [k, r - s] for 1 <= s <= r."""
    if not 1 <= s <= r:
        raise ValueError("need 1 <= s <= r")
    return qbinom(s + k - r - 1, s - 1) * qbinom(k, r - s)


def two_slot_expansion(r: int, k: int, ell: int) -> dict:
    """Closed-form expansion of (r + k, ell); valid for k >= -r."""
    out = {}
    for s in range(1, r + 1):
        c = qbinom(s + k - 1, s - 1) * qbinom(r + k, r - s)
        if not c:
            continue
        key = (r - s, ell + s + k)
        if key[1] < 0:
            raise ArithmeticError(f"nonzero coefficient on a negative slot at s={s}")
        out[key] = c if s % 2 == 1 else -c
    return out


def reindexed_expansion(r: int, k: int, ell: int) -> dict:
    """Expansion of (k, ell) through a_coeff; valid for k >= 0."""
    out = {}
    for s in range(1, r + 1):
        c = a_coeff(k, s, r)
        if not c:
            continue
        key = (r - s, ell + s + k - r)
        if key[1] < 0:
            raise ArithmeticError(f"nonzero coefficient on a negative slot at s={s}")
        out[key] = c if s % 2 == 1 else -c
    return out


def _diff(x: dict, y: dict) -> dict:
    out = dict(x)
    _axpy(out, y, -ONE)
    return out


def verify_two_slot_expansion(r: int, k: int, ell: int, rep: Report = None) -> Report:
    """Rewriting oracle against both closed forms for two slots."""
    rep = rep or Report("two-slot expansion")
    if k < -r:
        raise ValueError("need k >= -r")
    nf = normal_form_vn((r + k, ell), r)
    res = _diff(nf, two_slot_expansion(r, k, ell))
    rep.add("two-slot closed form matches rewriting", not res, r=r, k=k, ell=ell,
            residual=vector_to_list(res))
    if r + k >= 0:
        res2 = _diff(nf, reindexed_expansion(r, r + k, ell))
        rep.add("reindexed two-slot form matches rewriting", not res2, r=r, k=r + k, ell=ell,
                residual=vector_to_list(res2))
    return rep


def alternating_sum_lemma(r: int, t: int, k: int) -> LaurentPoly:
    """sum_s (-1)^s [r,s][t+k-s-1, t-1][r+k-s, r-t]; zero for 1 <= t <= r."""
    acc = ZERO
    for s in range(r + 1):
        term = qbinom(r, s) * qbinom(t + k - s - 1, t - 1) * qbinom(r + k - s, r - t)
        acc = acc + term if s % 2 == 0 else acc - term
    return acc


def verify_alternating_sum_lemma(r: int, t: int, k: int, rep: Report = None) -> Report:
    rep = rep or Report("alternating q-binomial sum")
    if not 1 <= t <= r:
        raise ValueError("need 1 <= t <= r")
    s = alternating_sum_lemma(r, t, k)
    rep.add("alternating q-binomial sum vanishes", not s, r=r, t=t, k=k, residual=str(s))
    return rep


def multi_slot_coefficient(a, k: int, r: int) -> LaurentPoly:
    """Predicted coefficient of ``a`` in the normal form of (k, 0, ..., 0, l)."""
    n = len(a)
    c = ONE
    x = 0
    for i in range(n - 1):
        c = c * a_coeff(k - x, r - a[i], r)
        if not c:
            return ZERO
        x += a[i]
    sign = sum(a[:-1]) + (n - 1) * (r - 1)
    return -c if sign % 2 else c


def verify_multi_slot_coefficients(n: int, r: int, k: int, ell: int,
                                   rep: Report = None) -> Report:
    """Every SE coefficient of (k, 0, ..., 0, ell) against the product of a_coeff."""
    rep = rep or Report("multi-slot coefficients")
    if n < 2:
        raise ValueError("need n >= 2")
    start = (k,) + (0,) * (n - 2) + (ell,)
    nf = normal_form_vn(start, r)
    bad = None
    seen = 0
    for a in se_tuples(n, r, k + ell):
        seen += 1
        want = multi_slot_coefficient(a, k, r)
        got = nf.get(a, ZERO)
        if want != got:
            bad = {"tuple": list(a), "rewriting": str(got), "formula": str(want)}
            break
    rep.add("multi-slot coefficients match rewriting", bad is None, n=n, r=r, k=k, ell=ell,
            tuples=seen, first_mismatch=bad)
    return rep


def star_serre_vn(n: int, r: int) -> dict:
    """sum_k (-1)^k [L,k] NF((k, 0, ..., 0, L-k)) with L = (n-1)(r-1)+1."""
    L = (n - 1) * (r - 1) + 1
    acc = {}
    for k in range(L + 1):
        c = qbinom(L, k)
        _axpy(acc, normal_form_vn((k,) + (0,) * (n - 2) + (L - k,), r), -c if k % 2 else c)
    return acc


def verify_star_serre_vn(n: int, r: int, allow_large: bool = False,
                         rep: Report = None) -> Report:
    inst = IdentityInstance(r=r, n=n)
    inst.check_budget(allow_large)
    rep = rep or Report("star Serre identity in V_n")
    res = star_serre_vn(n, r)
    rep.add("star Serre alternating sum vanishes in V_n", not res, n=n, r=r, L=inst.L,
            residual=vector_to_list(res))
    return rep


# ---- matrices ------------------------------------------------------------
def _check_sets(n: int, m: int, sets) -> list:
    sets = [frozenset(s) for s in sets]
    if len(sets) != m:
        raise ValueError("need one interaction set per row")
    sizes = {len(s) for s in sets}
    if len(sizes) != 1:
        raise ValueError("interaction sets must have equal size")
    for s in sets:
        if any(not 1 <= c <= n - 1 for c in s):
            raise ValueError("interaction columns must lie in [1, n-1]")
    return sets


def normal_form_vnm(M, r: int, sets) -> dict:
    """Normal form of a matrix (rows = tuples) as {row-tuple-of-tuples: coeff}."""
    rows = [tuple(row) for row in M]
    n = len(rows[0])
    sets = _check_sets(n, len(rows), sets)
    acc = {(): ONE}
    for row, inter in zip(rows, sets):
        nf = normal_form_row(row, r, inter)
        nxt = {}
        for key, c in acc.items():
            for t, d in nf.items():
                nxt[key + (t,)] = c * d
        acc = nxt
    return _clean(acc)


def project_row(row, inter) -> tuple:
    """Collapse free columns into the next interacting column (or the last)."""
    cols = sorted(inter)
    out = []
    prev = 0
    for c in cols + [len(row)]:
        out.append(sum(row[prev:c]))
        prev = c
    return tuple(out)


def embed_row(b, inter, n: int) -> tuple:
    row = [0] * n
    for c, x in zip(sorted(inter) + [n], b):
        row[c - 1] += x
    return tuple(row)


def matrix_coefficient(M, ks, r: int, sets) -> LaurentPoly:
    """Predicted coefficient of ``M`` in NF((k, 0, ..., 0, l)), row by row.

    A row with mass on a non-interacting column before the last is never in
    the normal form, so it gets coefficient zero.
    """
    n = len(M[0])
    c = ONE
    for row, k, inter in zip(M, ks, sets):
        if any(row[j] for j in range(n - 1) if (j + 1) not in inter):
            return ZERO
        b = project_row(row, inter)
        c = c * multi_slot_coefficient(b, k, r)
        if not c:
            return ZERO
    return c


def matrix_serre(n: int, m: int, N: int, r: int, sets) -> dict:
    L = (N - 1) * (r - 1) + 1
    sets = _check_sets(n, m, sets)
    if any(len(s) != N - 1 for s in sets):
        raise ValueError("interaction sets must have N - 1 elements")
    acc = {}
    for ks in itertools.product(range(L + 1), repeat=m):
        c = ONE
        for k in ks:
            c = c * qbinom(L, k)
        if sum(ks) % 2:
            c = -c
        M = [(k,) + (0,) * (n - 2) + (L - k,) for k in ks]
        _axpy(acc, normal_form_vnm(M, r, sets), c)
    return acc


def verify_matrix_serre(n: int, m: int, N: int, r: int, sets, check_coefficients: bool = True,
                        allow_large: bool = False, rep: Report = None) -> Report:
    inst = IdentityInstance(r=r, n=n, m=m, N=N)
    inst.check_budget(allow_large)
    rep = rep or Report("matrix Serre identity")
    sets = _check_sets(n, m, sets)
    L = inst.L
    if check_coefficients:
        bad = None
        count = 0
        for ks in itertools.product(range(L + 1), repeat=m):
            M = [(k,) + (0,) * (n - 2) + (L - k,) for k in ks]
            nf = normal_form_vnm(M, r, sets)
            rows_se = [list(se_rows(n, r, L)) for _ in range(m)]
            for key in itertools.product(*rows_se):
                count += 1
                want = matrix_coefficient(key, ks, r, sets)
                got = nf.get(tuple(key), ZERO)
                if want != got:
                    bad = {"k": list(ks), "matrix": [list(x) for x in key],
                           "rewriting": str(got), "formula": str(want)}
                    break
            if bad:
                break
        rep.add("matrix coefficients match rewriting", bad is None, n=n, m=m, N=N, r=r,
                entries=count, first_mismatch=bad)
    res = matrix_serre(n, m, N, r, sets)
    rep.add("matrix Serre alternating sum vanishes", not res, n=n, m=m, N=N, r=r, L=L,
            sets=[sorted(s) for s in sets], residual=vector_to_list(res))
    return rep


def se_rows(n: int, r: int, total: int):
    """Rows of SE_{n,m}(total)."""
    return se_tuples(n, r, total)


# ---- the k-dependence of the coefficient products ------------------------
def _lagrange_coeffs(ys, vals):
    """Coefficients G_j of the polynomial through (ys[m], vals[m]) over Q(q)."""
    npts = len(ys)
    G = [RatFunc(ZERO)] * npts
    for m_, (ym, vm) in enumerate(zip(ys, vals)):
        poly = [ONE]  # prod_{l != m} (y - y_l), low degree first
        den = ONE
        for l, yl in enumerate(ys):
            if l == m_:
                continue
            nxt = [ZERO] * (len(poly) + 1)
            for j, c in enumerate(poly):
                nxt[j] = nxt[j] - c * yl
                nxt[j + 1] = nxt[j + 1] + c
            poly = nxt
            den = den * (ym - yl)
        scale = RatFunc(vm) / RatFunc(den)
        for j, c in enumerate(poly):
            G[j] = G[j] + scale * RatFunc(c)
    return G


def verify_coefficient_factorization(N: int, r: int, extra=(-2, -1), rep: Report = None) -> Report:
    """For every a in [0, r-1]^{N-1}, prod_j a_coeff(k - x_j, r - a_j, r) is
    sum_j G_j q^{-k(D - 2j)} with D = (N-1)(r-1) and G_j free of k.

    The G_j are solved from the D + 1 values at k = 0..D, then the fit is
    checked at further values of k.
    """
    rep = rep or Report("coefficient factorization in k")
    D = (N - 1) * (r - 1)
    fit = list(range(D + 1))
    probe = list(extra) + [D + 1, D + 2]
    bad = None
    count = 0
    for a in itertools.product(range(r), repeat=N - 1):
        row = a + (0,)

        def H(k):
            # the last entry never enters the product
            return multi_slot_coefficient(row, k, r) * (-1 if (sum(a) + D) % 2 else 1)

        ys = [LaurentPoly.monomial(2 * k) for k in fit]
        vals = [H(k).shift(k * D) for k in fit]
        G = _lagrange_coeffs(ys, vals)
        for k in probe:
            y = LaurentPoly.monomial(2 * k)
            pred = RatFunc(ZERO)
            ypow = ONE
            for g in G:
                pred = pred + g * RatFunc(ypow)
                ypow = ypow * y
            got = RatFunc(H(k).shift(k * D))
            count += 1
            if pred != got and bad is None:
                bad = {"a": list(a), "k": k, "fit": str(pred), "value": str(got)}
    rep.add("coefficient product is a Laurent polynomial in q^-k of the expected shape",
            bad is None, N=N, r=r, D=D, probes=count, first_mismatch=bad)
    return rep


def verify_strategy_independence(n: int, r: int, samples: int = 500, max_entry: int = None,
                                 seed: int = 0, rep: Report = None) -> Report:
    """Leftmost recursion vs rightmost and random worklists on random tuples."""
    rep = rep or Report("rewriting strategy independence")
    rng = random.Random(seed)
    hi = max_entry if max_entry is not None else 2 * r
    bad = None
    for _ in range(samples):
        a = tuple(rng.randint(0, hi) for _ in range(n))
        ref = normal_form_vn(a, r)
        for strat in ("leftmost", "rightmost", "random"):
            got = normal_form_strategy(a, r, strat, rng)
            if got != ref:
                bad = {"tuple": list(a), "strategy": strat}
                break
        if bad:
            break
        if not all(is_normal(t, r) for t in ref):
            bad = {"tuple": list(a), "strategy": "support outside SE"}
            break
    rep.add("normal form independent of rewriting strategy", bad is None, n=n, r=r,
            samples=samples, counterexample=bad)
    return rep


# ---- the same identities inside U_q^- -------------------------------------
def star_shape(datum: CartanDatum, eta, eta2) -> dict:
    """Check the star conditions and return m, n, N, r, L, d, sets.

    ``eta`` and ``eta2`` are index lists.  Members of each group must be
    mutually orthogonal; every member of ``eta`` must meet the same number
    of members of ``eta2`` with one common Cartan entry.
    """
    eta, eta2 = list(eta), list(eta2)
    if set(eta) & set(eta2):
        raise ValueError("groups must be disjoint")
    for grp in (eta, eta2):
        for i, j in itertools.combinations(grp, 2):
            if datum.gram[i][j]:
                raise ValueError("members of a group must be orthogonal")
    sets = []
    entries = set()
    for i in eta:
        A = frozenset(k + 1 for k, j in enumerate(eta2) if datum.gram[i][j])
        sets.append(A)
        entries |= {datum.a(i, eta2[k - 1]) for k in A}
    if len({len(A) for A in sets}) != 1 or len(entries) > 1:
        raise ValueError("not a star shape: uneven neighbourhoods")
    ds = {datum.d(i) for i in eta}
    if len(ds) != 1:
        raise ValueError("members of eta must have equal length")
    N = len(sets[0]) + 1
    r = 1 - entries.pop() if entries else 2
    a_tot = sum(datum.a(eta[0], j) for j in eta2)
    L = 1 - a_tot
    if N > 1 and L != (N - 1) * (r - 1) + 1:
        raise ArithmeticError("inconsistent Cartan entries")
    return {"m": len(eta), "n": len(eta2) + 1, "N": N, "r": r, "L": L,
            "d": ds.pop(), "sets": sets}


def _power(alg, i: int, k: int):
    """Ordinary power f_i^k."""
    return alg.divided_power(i, k).scale(qfact(k, alg.datum.d(i)))


def matrix_to_uq(alg, eta, eta2, M):
    """Image of a tuple matrix: column blocks of eta-powers separated by eta2."""
    n = len(M[0])
    x = alg.one()
    for col in range(n):
        for row, i in enumerate(eta):
            if M[row][col]:
                x = x * _power(alg, i, M[row][col])
        if col < n - 1:
            x = x * alg.divided_power(eta2[col], 1)
    return x


def multi_index_serre_uq(datum: CartanDatum, eta, eta2):
    """sum over k in [0,L]^m of signed [L,k_i]_{d} products, as a UqElement."""
    from .uqminus import UqAlgebra
    sh = star_shape(datum, eta, eta2)
    alg = UqAlgebra.of(datum)
    L, d, m = sh["L"], sh["d"], sh["m"]
    acc = None
    for ks in itertools.product(range(L + 1), repeat=m):
        c = ONE
        for k in ks:
            c = c * qbinom(L, k, d)
        if sum(ks) % 2:
            c = -c
        x = alg.one()
        for i, k in zip(eta, ks):
            x = x * _power(alg, i, k)
        for j in eta2:
            x = x * alg.divided_power(j, 1)
        for i, k in zip(eta, ks):
            x = x * _power(alg, i, L - k)
        x = x.scale(c)
        acc = x if acc is None else acc + x
    return acc


def verify_rewriting_in_uq(datum: CartanDatum, eta, eta2, max_total: int = 4,
                           rep: Report = None) -> Report:
    """Each matrix equals the image of its normal form in U_q^- (q -> q^d)."""
    from .uqminus import UqAlgebra
    rep = rep or Report("rewriting relations in U_q^-")
    sh = star_shape(datum, eta, eta2)
    alg = UqAlgebra.of(datum)
    n, r, d, sets = sh["n"], sh["r"], sh["d"], sh["sets"]
    bad = None
    count = 0
    row_choices = [t for s in range(max_total + 1)
                   for t in itertools.product(range(s + 1), repeat=n) if sum(t) == s]
    for M in itertools.product(row_choices, repeat=sh["m"]):
        if sum(map(sum, M)) > max_total or sum(map(sum, M)) == 0:
            continue
        nf = normal_form_vnm(M, r, sets)
        lhs = matrix_to_uq(alg, eta, eta2, M)
        for key, c in nf.items():
            lhs = lhs - matrix_to_uq(alg, eta, eta2, key).scale(c.subs_power(d))
        count += 1
        if not lhs.is_zero():
            bad = {"matrix": [list(x) for x in M]}
            break
    rep.add("rewriting steps hold in U_q^-", bad is None, matrices=count, counterexample=bad)
    return rep


def verify_star_identity_uq(datum: CartanDatum, eta, eta2, aut: DiagramAut = None,
                            p: int = None, rep: Report = None) -> Report:
    """The star identities inside U_q^- of ``datum``.

    * single centre (|eta| = 1): the alternating sum lies in the radical;
    * any |eta|: the multi-index sum lies in the radical;
    * with an automorphism whose orbits include ``eta`` and ``eta2`` and a
      prime ``p``: the orbit-product Serre sum with [L,k]_{m d} vanishes
      in the orbit algebra modulo J over F_p.
    """
    rep = rep or Report("star identities in U_q^-")
    sh = star_shape(datum, eta, eta2)
    labels = {"eta": [datum.labels[i] for i in eta], "eta2": [datum.labels[j] for j in eta2]}
    x = multi_index_serre_uq(datum, eta, eta2)
    name = ("single-centre alternating sum lies in the radical" if sh["m"] == 1
            else "multi-index alternating sum lies in the radical")
    rep.add(name, x.is_zero(), L=sh["L"], m=sh["m"], **labels)
    if aut is not None:
        if p is None:
            raise ValueError("a prime is needed for the folded check")
        rep.add("orbit Serre sum vanishes modulo J",
                orbit_serre_mod_J(datum, aut, p, eta, eta2), L=sh["L"], p=p, **labels)
    return rep


def orbit_serre_mod_J(datum: CartanDatum, aut: DiagramAut, p: int, eta, eta2) -> bool:
    from .foldmodp import FoldContext
    sh = star_shape(datum, eta, eta2)
    orbits = {frozenset(o) for o in aut.orbits()}
    if frozenset(eta) not in orbits or frozenset(eta2) not in orbits:
        raise ValueError("eta and eta2 must be orbits of the automorphism")
    L, m, d = sh["L"], sh["m"], sh["d"]
    nu = [0] * datum.rank
    for i in eta:
        nu[i] = L
    for j in eta2:
        nu[j] = 1
    X = datum.canonical()
    to_x = [X.index(lab) for lab in datum.labels]
    target = [0] * X.rank
    for i, c in enumerate(nu):
        target[to_x[i]] = c
    ctx = FoldContext(datum, aut, p, 1, extra_targets=[tuple(target)])
    alg = ctx.table.alg
    xe = [to_x[i] for i in eta]
    xe2 = [to_x[j] for j in eta2]
    acc = alg.zero(tuple(target))
    for k in range(L + 1):
        x = alg.one()
        for i in xe:
            x = x * _power(alg, i, k)
        for j in xe2:
            x = x * alg.divided_power(j, 1)
        for i in xe:
            x = x * _power(alg, i, L - k)
        c = qbinom(L, k, m * d)
        acc = acc + x.scale(-c if k % 2 else c)
    return ctx.pi(acc).is_zero()
