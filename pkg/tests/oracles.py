"""Independent reference computations used to freeze expected values.

Everything here runs on sympy rational functions and shares no code with
``qfold``: q-binomials come from the q-Pascal recurrence, the bilinear form
is computed by peeling letters off the right end of words (the package
peels from the left), and root-multiset counts use hand-listed positive
roots.  ``python3 tests/oracles.py`` rewrites ``tests/data/frozen.json``.
"""

import itertools
import json
import os
from functools import lru_cache

import sympy as sp

q = sp.Symbol("q")
HERE = os.path.dirname(__file__)
FROZEN = os.path.join(HERE, "data", "frozen.json")


def laurent_text(expr) -> str:
    """Canonical text of a Laurent polynomial: ``c*q^e`` terms, ascending."""
    expr = sp.expand(sp.cancel(expr))
    num, den = sp.fraction(sp.together(expr))
    pden = sp.Poly(den, q)
    if len(pden.terms()) != 1:
        raise ValueError(f"not a Laurent polynomial: {expr}")
    (shift,), cden = pden.terms()[0]
    terms = {}
    for (e,), c in sp.Poly(num, q).terms():
        if c % cden:
            raise ValueError("non-integral coefficient")
        terms[e - shift] = int(c // cden)
    parts = []
    for e in sorted(terms):
        c = terms[e]
        if c:
            parts.append(str(c) if e == 0 else f"{c}*q^{e}")
    return " + ".join(parts) if parts else "0"


@lru_cache(maxsize=None)
def qbinom_pascal(n: int, k: int):
    """[n, k] with [n,k] = q^{-k}[n-1,k] + q^{n-k}[n-1,k-1]; negative n by
    [-n, k] = (-1)^k [n+k-1, k]."""
    if k < 0:
        return sp.Integer(0)
    if n < 0:
        return (-1) ** k * qbinom_pascal(-n + k - 1, k)
    if k == 0:
        return sp.Integer(1)
    if k > n:
        return sp.Integer(0)
    return sp.expand(q ** (-k) * qbinom_pascal(n - 1, k) + q ** (n - k) * qbinom_pascal(n - 1, k - 1))


def qint_sym(n: int, d: int = 1):
    return sp.cancel((q ** (d * n) - q ** (-d * n)) / (q ** d - q ** (-d)))


# ---- bilinear form by right peeling ----------------------------------------
def right_derivation(word, i, gram):
    """r_i on a word: dict word -> coefficient."""
    out = {}
    # r_i(y f_j) = q^{-(a_j, a_i)} r_i(y) f_j + delta_ij y
    if not word:
        return out
    *y, j = word
    y = tuple(y)
    if j == i:
        out[y] = out.get(y, 0) + 1
    for w, c in right_derivation(y, i, gram).items():
        key = w + (j,)
        out[key] = out.get(key, 0) + c * q ** (-gram[j][i])
    return out


def form(x, y, gram):
    """(x, y) for words x, y via (x' f_i, y) = (f_i, f_i)(x', r_i y)."""
    @lru_cache(maxsize=None)
    def pair(a, b):
        if len(a) != len(b):
            return sp.Integer(0)
        if not a:
            return sp.Integer(1)
        *xs, i = a
        fi = 1 / (1 - q ** gram[i][i])
        total = sp.Integer(0)
        for w, c in right_derivation(b, i, gram).items():
            total += c * pair(tuple(xs), w)
        return sp.cancel(fi * total)
    return pair(tuple(x), tuple(y))


def words(nu):
    letters = [i for i, c in enumerate(nu) for _ in range(c)]
    return sorted(set(itertools.permutations(letters)))


def gram_matrix(gram, nu):
    ws = words(nu)
    return ws, [[sp.factor(form(a, b, tuple(map(tuple, gram)))) for b in ws] for a in ws]


# ---- root multisets --------------------------------------------------------
ROOTS = {
    "a2": [(1, 0), (0, 1), (1, 1)],
    "a3": [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 1, 1)],
    # long root first: gram [[4,-2],[-2,2]]
    "b2": [(1, 0), (0, 1), (1, 1), (1, 2)],
    "g2": [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 3)],
}


def partitions(roots, nu):
    @lru_cache(maxsize=None)
    def count(rest, k):
        if not any(rest):
            return 1
        if k == len(roots):
            return 0
        total, cur = 0, rest
        while min(cur) >= 0:
            total += count(cur, k + 1)
            cur = tuple(a - b for a, b in zip(cur, roots[k]))
        return total
    return count(tuple(nu), 0)


def weights_up_to(n, h):
    return [w for w in itertools.product(range(h + 1), repeat=n) if 0 < sum(w) <= h]


def freeze():
    out = {}
    out["qbinom"] = {f"{n},{k}": laurent_text(qbinom_pascal(n, k))
                     for n in range(-4, 9) for k in range(0, 6)}
    out["qint"] = {f"{n},{d}": laurent_text(qint_sym(n, d)) for n in range(-3, 7) for d in (1, 2, 3)}
    A1 = [[2]]
    A2 = [[2, -1], [-1, 2]]
    B2 = [[4, -2], [-2, 2]]
    ff = form((0, 0), (0, 0), (tuple(A1[0]),))
    # (f^(2), f^(2)) = (f f, f f) / [2]^2
    out["a1_div2_norm"] = str(sp.factor(sp.cancel(ff / qint_sym(2) ** 2)))
    grams = {}
    for name, g, nus in (("a2", A2, [(1, 1), (2, 1), (2, 2)]), ("b2", B2, [(1, 1), (1, 2), (2, 1)])):
        for nu in nus:
            ws, m = gram_matrix(g, nu)
            grams[f"{name}:{nu[0]}_{nu[1]}"] = {
                "words": [list(w) for w in ws],
                "entries": [[str(sp.cancel(e)) for e in row] for row in m],
            }
    out["gram"] = grams
    out["kostant"] = {
        name: {"_".join(map(str, w)): partitions(ROOTS[name], w)
               for w in weights_up_to(len(ROOTS[name][0]), 6 if name in ("a2", "a3") else 5)}
        for name in ROOTS
    }
    return out


if __name__ == "__main__":
    data = freeze()
    os.makedirs(os.path.dirname(FROZEN), exist_ok=True)
    with open(FROZEN, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {FROZEN}")
