"""U_q^- one weight at a time: the free algebra modulo the radical of the form.

An element is stored as an integer Laurent combination of divided-power
monomials ``f_{i_1}^{(a_1)} ... f_{i_L}^{(a_L)}`` (adjacent labels distinct).
Equality in the quotient is decided by the *derivative vector*

    phi(x)_v = (ir_{v_N} ... ir_{v_1})(x),   v a word of weight nu,

because ``(f_v, x) = phi(x)_v / D_nu`` with ``D_nu = prod_i (1 - q_i^2)^{nu_i}``;
so ``phi(x) == 0`` exactly when x lies in the radical.  All computations are
over Z[q, q^-1], denominators never appear.
"""

import itertools

from .cartan import CartanDatum
from .freealg import FreeElement, form_denominator, words_of_weight
from .linalg import SPECIAL_POINTS, fraction_free_rank, rank_at, series_solve
from .qarith import ONE, ZERO, LaurentPoly, Q, RatFunc, membership, qbinom, qfact

DEFAULT_HEIGHT_CAP = 8

__all__ = [
    "UqAlgebra", "UqElement", "WeightSpace", "weight_space", "eq_mod_radical",
    "serre_element", "serre_check", "divided_monomial", "pi_operator",
    "i_decompose", "epsilon", "kashiwara_F", "kashiwara_E", "lattice_check",
    "expand_in_family", "gram_numerators", "kernel_intersection_rank",
    "HeightCapError",
]


class HeightCapError(ValueError):
    pass


def _mono_weight(mono, n):
    w = [0] * n
    for i, a in mono:
        w[i] += a
    return tuple(w)


def _mono_word(mono):
    out = []
    for i, a in mono:
        out.extend([i] * a)
    return tuple(out)


class UqAlgebra:
    """Per-datum caches: words, denominators and derivative vectors of
    monomials.  Use ``UqAlgebra.of(datum)``."""

    _registry = {}

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        self.n = datum.rank
        self.g = datum.gram
        self.dd = tuple(datum.d(i) for i in range(self.n))
        self._words = {}
        self._index = {}
        self._phi = {(): {(): ONE}}
        self._delta = {}
        self._mult = {}

    @classmethod
    def of(cls, datum: CartanDatum) -> "UqAlgebra":
        alg = cls._registry.get(datum)
        if alg is None:
            alg = cls._registry[datum] = cls(datum)
        return alg

    def words(self, nu) -> list:
        nu = tuple(nu)
        w = self._words.get(nu)
        if w is None:
            w = self._words[nu] = words_of_weight(nu)
            self._index[nu] = {x: k for k, x in enumerate(w)}
        return w

    def word_index(self, nu) -> dict:
        self.words(nu)
        return self._index[tuple(nu)]

    def denominator(self, nu) -> LaurentPoly:
        return form_denominator(self.datum, nu)

    def delta(self, nu) -> LaurentPoly:
        """Common denominator of the form on divided monomials of weight nu."""
        nu = tuple(nu)
        out = self._delta.get(nu)
        if out is None:
            out = self.denominator(nu)
            for i, c in enumerate(nu):
                out = out * qfact(c, self.dd[i])
            self._delta[nu] = out
        return out

    def multinomial(self, mono) -> LaurentPoly:
        """prod_i [nu_i]! / prod_{blocks of i} [a]!  (a Laurent polynomial)."""
        out = self._mult.get(mono)
        if out is None:
            nu = _mono_weight(mono, self.n)
            rest = list(nu)
            out = ONE
            for i, a in mono:
                out = out * qbinom(rest[i], a, self.dd[i])
                rest[i] -= a
            self._mult[mono] = out
        return out

    def phi_mono(self, mono) -> dict:
        """Derivative vector of a divided monomial (sparse, memoized)."""
        hit = self._phi.get(mono)
        if hit is not None:
            return hit
        (i, a), rest = mono[0], mono[1:]
        base = self.phi_mono(rest)
        gi = [self.g[j][i] for j in range(self.n)]
        e0 = -self.dd[i] * a * (a - 1) // 2
        out = {}
        for w, c in base.items():
            L = len(w)
            prefix = [0] * (L + 1)
            for t, j in enumerate(w):
                prefix[t + 1] = prefix[t] + gi[j]
            for pos in itertools.combinations_with_replacement(range(L + 1), a):
                v = []
                k = 0
                for t in range(L + 1):
                    while k < a and pos[k] == t:
                        v.append(i)
                        k += 1
                    if t < L:
                        v.append(w[t])
                v = tuple(v)
                e = e0 - sum(prefix[p] for p in pos)
                term = c.shift(e)
                prev = out.get(v)
                out[v] = term if prev is None else prev + term
        out = {v: c for v, c in out.items() if c}
        self._phi[mono] = out
        return out

    def merge(self, blocks):
        """Normalize a block list: drop zero powers, merge equal neighbours.

        Returns ``(coefficient, mono)``.
        """
        coeff = ONE
        out = []
        for i, a in blocks:
            if not a:
                continue
            if out and out[-1][0] == i:
                b = out[-1][1]
                coeff = coeff * qbinom(a + b, a, self.dd[i])
                out[-1] = (i, a + b)
            else:
                out.append((i, a))
        return coeff, tuple(out)

    def element(self, terms, weight) -> "UqElement":
        return UqElement(self, terms, weight)

    def one(self) -> "UqElement":
        return UqElement(self, {(): ONE}, (0,) * self.n)

    def zero(self, weight) -> "UqElement":
        return UqElement(self, {}, weight)

    def divided_power(self, i: int, a: int) -> "UqElement":
        w = [0] * self.n
        w[i] = a
        mono = ((i, a),) if a else ()
        return UqElement(self, {mono: ONE}, w)


class UqElement:
    """Homogeneous element of U_q^- with integer Laurent coefficients on
    divided monomials."""

    __slots__ = ("alg", "weight", "terms", "_phi")

    def __init__(self, alg: UqAlgebra, terms, weight):
        self.alg = alg
        self.weight = tuple(weight)
        self.terms = {m: c for m, c in terms.items() if c}
        self._phi = None

    @property
    def datum(self) -> CartanDatum:
        return self.alg.datum

    @property
    def height(self) -> int:
        return sum(self.weight)

    def _like(self, terms, weight=None):
        return UqElement(self.alg, terms, self.weight if weight is None else weight)

    def _check(self, other):
        if self.alg is not other.alg:
            raise ValueError("datum mismatch")
        if self.weight != other.weight:
            raise ValueError("weight mismatch")

    # ---- linear structure ------------------------------------------------
    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
        return self._like(out)

    def __neg__(self):
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "UqElement":
        if isinstance(c, int):
            c = LaurentPoly(c)
        return self._like({m: x * c for m, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, UqElement):
            return self.scale(other)
        if self.alg is not other.alg:
            raise ValueError("datum mismatch")
        out = {}
        for (m1, c1), (m2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            k, m = self.alg.merge(m1 + m2)
            c = c1 * c2 * k
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
        w = tuple(a + b for a, b in zip(self.weight, other.weight))
        return self._like(out, w)

    def __rmul__(self, c):
        return self.scale(c)

    # ---- involutions and symmetries ------------------------------------
    def bar(self) -> "UqElement":
        return self._like({m: c.bar() for m, c in self.terms.items()})

    def star(self) -> "UqElement":
        return self._like({tuple(reversed(m)): c for m, c in self.terms.items()})

    def act(self, perm) -> "UqElement":
        """Image under the datum automorphism ``i -> perm[i]``."""
        terms = {tuple((perm[i], a) for i, a in m): c for m, c in self.terms.items()}
        w = [0] * len(self.weight)
        for i, c in enumerate(self.weight):
            w[perm[i]] = c
        return self._like(terms, w)

    # ---- derivations -----------------------------------------------------
    def ir(self, i: int) -> "UqElement":
        if not self.weight[i]:
            w = list(self.weight)
            return self._like({}, w)
        alg = self.alg
        g = alg.g
        d = alg.dd[i]
        out = {}
        for m, c in self.terms.items():
            pre = 0
            for t, (j, a) in enumerate(m):
                if j == i:
                    blocks = list(m)
                    blocks[t] = (i, a - 1)
                    k, nm = alg.merge(blocks)
                    term = c * k.shift(-pre - d * (a - 1))
                    prev = out.get(nm)
                    out[nm] = term if prev is None else prev + term
                pre += a * g[j][i]
        w = list(self.weight)
        w[i] -= 1
        return self._like(out, w)

    def ri(self, i: int) -> "UqElement":
        return self.star().ir(i).star()

    # ---- quotient structure ---------------------------------------------
    def phi(self) -> dict:
        """Derivative vector: word -> LaurentPoly (sparse)."""
        if self._phi is None:
            out = {}
            for m, c in self.terms.items():
                for v, x in self.alg.phi_mono(m).items():
                    term = x * c
                    prev = out.get(v)
                    out[v] = term if prev is None else prev + term
            self._phi = {v: x for v, x in out.items() if x}
        return self._phi

    def is_zero(self) -> bool:
        return not self.phi()

    def key(self) -> tuple:
        """Hashable canonical key of the class modulo the radical."""
        return tuple(sorted(self.phi().items()))

    def key_text(self) -> str:
        return ";".join(f"{''.join(map(str, v))}:{c}" for v, c in self.key())

    def __eq__(self, other):
        if not isinstance(other, UqElement):
            return NotImplemented
        return self.alg is other.alg and self.weight == other.weight and self.phi() == other.phi()

    def __hash__(self):
        return hash((self.weight, self.key()))

    def pair_numerator(self, other: "UqElement") -> LaurentPoly:
        """Numerator of (self, other) over ``alg.delta(weight)``."""
        if self.weight != other.weight:
            return ZERO
        ph = other.phi()
        acc = ZERO
        for m, c in self.terms.items():
            x = ph.get(_mono_word(m))
            if x:
                acc = acc + c * self.alg.multinomial(m) * x
        return acc

    def pair(self, other: "UqElement") -> RatFunc:
        if self.alg is not other.alg:
            raise ValueError("datum mismatch")
        if self.weight != other.weight:
            return RatFunc(0)
        return RatFunc(self.pair_numerator(other), self.alg.delta(self.weight))

    # ---- conversions -----------------------------------------------------
    def to_free(self) -> FreeElement:
        terms = {}
        for m, c in self.terms.items():
            den = ONE
            for i, a in m:
                den = den * qfact(a, self.alg.dd[i])
            x = RatFunc(c, den)
            w = _mono_word(m)
            terms[w] = terms[w] + x if w in terms else x
        return FreeElement(self.datum, terms, self.weight)

    @classmethod
    def from_free(cls, alg: UqAlgebra, x: FreeElement) -> "UqElement":
        """Import a free-algebra element whose coefficients are Laurent."""
        out = {}
        for w, c in x.terms.items():
            if isinstance(c, RatFunc):
                c = c.as_laurent()
            k, m = alg.merge([(i, 1) for i in w])
            term = c * k
            prev = out.get(m)
            out[m] = term if prev is None else prev + term
        return cls(alg, out, x.weight)

    def to_dict(self) -> dict:
        labels = self.datum.labels
        return {
            "weight": list(self.weight),
            "terms": [{"mono": [[labels[i], a] for i, a in m], "coeff": str(c)}
                      for m, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_dict(cls, alg: UqAlgebra, data: dict) -> "UqElement":
        terms = {}
        for t in data["terms"]:
            m = tuple((alg.datum.index(lab), int(a)) for lab, a in t["mono"])
            terms[m] = LaurentPoly.from_text(t["coeff"])
        return cls(alg, terms, data["weight"])

    def __repr__(self):
        if not self.terms:
            return "0"
        labels = self.datum.labels
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "".join(f"f{labels[i]}" + (f"^({a})" if a > 1 else "") for i, a in m) or "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# weight spaces

class WeightSpace:
    """Gram data of the words of one weight.

    ``gram_num[s][t]`` is the numerator of ``(w_s, w_t)`` over ``denominator``.
    The dimension is certified: the Gram rank at a specialization is a lower
    bound for the rank, the rank of the Serre-ideal rows is a lower bound for
    the radical, and the two must add up to the number of words.
    """

    def __init__(self, datum, nu, words, gram_num, denominator, pivots,
                 radical_rank, certified):
        self.datum = datum
        self.weight = tuple(nu)
        self.words = words
        self.gram_num = gram_num
        self.denominator = denominator
        self.pivots = pivots
        self.radical_rank = radical_rank
        self.certified = certified

    @property
    def dim(self) -> int:
        return len(self.words) - self.radical_rank

    def gram(self, s: int, t: int) -> RatFunc:
        return RatFunc(self.gram_num[s][t], self.denominator)

    def to_dict(self) -> dict:
        labels = self.datum.labels
        return {
            "datum": self.datum.digest(),
            "weight": list(self.weight),
            "words": [",".join(labels[i] for i in w) for w in self.words],
            "gram": [[str(x) for x in row] for row in self.gram_num],
            "denominator": str(self.denominator),
            "pivots": list(self.pivots),
            "radical_rank": self.radical_rank,
            "certified": self.certified,
        }

    @classmethod
    def from_dict(cls, datum, data) -> "WeightSpace":
        words = [tuple(datum.index(x) for x in w.split(",")) if w else () for w in data["words"]]
        gram = [[LaurentPoly.from_text(x) for x in row] for row in data["gram"]]
        return cls(datum, data["weight"], words, gram, LaurentPoly.from_text(data["denominator"]),
                   data["pivots"], data["radical_rank"], data["certified"])


def _word_phi(alg: UqAlgebra, w):
    k, m = alg.merge([(i, 1) for i in w])
    ph = alg.phi_mono(m)
    if k == ONE:
        return ph
    return {v: c * k for v, c in ph.items()}


def serre_element(datum: CartanDatum, i: int, j: int) -> FreeElement:
    """sum_k (-1)^k [L choose k]_{d_i} f_i^k f_j f_i^{L-k}, L = 1 - a_ij."""
    if i == j:
        raise ValueError("Serre relation needs i != j")
    L = 1 - datum.a(i, j)
    terms = {}
    for k in range(L + 1):
        w = (i,) * k + (j,) + (i,) * (L - k)
        terms[w] = qbinom(L, k, datum.d(i)).scale((-1) ** k)
    return FreeElement(datum, terms)


def _serre_rows(datum, nu, index):
    """Integer word-coordinate rows u * S_ij * v spanning part of the radical."""
    n = datum.rank
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            s = serre_element(datum, i, j)
            sw = s.weight
            rest = tuple(a - b for a, b in zip(nu, sw))
            if min(rest) < 0:
                continue
            for split in itertools.product(*(range(c + 1) for c in rest)):
                other = tuple(c - x for c, x in zip(rest, split))
                for u in words_of_weight(split):
                    for v in words_of_weight(other):
                        row = {}
                        for w, c in s.terms.items():
                            row[index[u + w + v]] = c
                        yield row


def weight_space(datum: CartanDatum, nu, height_cap: int = DEFAULT_HEIGHT_CAP,
                 cache_dir=None) -> WeightSpace:
    nu = tuple(int(x) for x in nu)
    if len(nu) != datum.rank or min(nu, default=0) < 0:
        raise ValueError("weight must be a nonnegative vector of the datum's rank")
    if sum(nu) > height_cap:
        raise HeightCapError(f"height {sum(nu)} exceeds the cap {height_cap}")
    path = None
    if cache_dir:
        from . import cache
        path = cache.weight_path(cache_dir, "gram", datum, nu)
        data = cache.read(path)
        if data is not None:
            return WeightSpace.from_dict(datum, data)
    alg = UqAlgebra.of(datum)
    words = alg.words(nu)
    index = alg.word_index(nu)
    gram = []
    for w in words:
        ph = _word_phi(alg, w)
        gram.append([ph.get(v, ZERO) for v in words])
    N = len(words)
    certified = False
    for t in SPECIAL_POINTS:
        rank, used = rank_at(gram, N, t)
        if rank == N:
            rad = 0
        else:
            rad, _ = rank_at(_serre_rows(datum, nu, index), N, t, limit=N - rank)
        if rank + rad == N:
            certified = True
            break
    ws = WeightSpace(datum, nu, words, gram, alg.denominator(nu), sorted(used), N - rank, certified)
    if path is not None:
        cache.write(path, ws.to_dict())
    return ws


def eq_mod_radical(x: UqElement, y: UqElement) -> bool:
    x._check(y)
    return x.phi() == y.phi()


def serre_check(datum: CartanDatum, i: int, j: int) -> bool:
    alg = UqAlgebra.of(datum)
    return UqElement.from_free(alg, serre_element(datum, i, j)).is_zero()


def divided_monomial(datum: CartanDatum, seq) -> UqElement:
    """Product of divided powers for ``seq = [(i, a), ...]``."""
    alg = UqAlgebra.of(datum)
    for _, a in seq:
        if a < 0:
            raise ValueError("powers must be nonnegative")
    k, m = alg.merge(list(seq))
    return UqElement(alg, {m: k}, _mono_weight(seq, datum.rank))


# ---------------------------------------------------------------------------
# i-decompositions and Kashiwara operators

def _ir_powers(x: UqElement, i: int) -> list:
    out = [x]
    for _ in range(x.weight[i]):
        out.append(out[-1].ir(i))
    return out


def _pi(alg, i, t, powers):
    d = alg.dd[i]
    acc = None
    for s in range(len(powers) - t):
        y = powers[s + t]
        if not y.terms:
            continue
        term = (alg.divided_power(i, s) * y).scale(Q(-d * s * (s - 1) // 2).scale((-1) ** s))
        acc = term if acc is None else acc + term
    if acc is None:
        w = list(powers[0].weight)
        w[i] -= t
        return alg.zero(w)
    return acc


def pi_operator(i: int, t: int, x: UqElement) -> UqElement:
    """Pi_{i,t}(x) = sum_s (-1)^s q_i^{-s(s-1)/2} f_i^{(s)} (ir)^{s+t}(x)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t > x.weight[i]:
        w = list(x.weight)
        w[i] -= t
        return x.alg.zero(w)
    return _pi(x.alg, i, t, _ir_powers(x, i))


def i_decompose(i: int, x: UqElement) -> list:
    """Components ``[(n, x_n)]`` of ``x = sum_n f_i^{(n)} x_n`` with
    ``x_n`` in ker ir, nonzero components only."""
    alg = x.alg
    d = alg.dd[i]
    powers = _ir_powers(x, i)
    out = []
    for n in range(x.weight[i] + 1):
        xn = _pi(alg, i, n, powers).scale(Q(d * n * (n - 1) // 2))
        if not xn.is_zero():
            out.append((n, xn))
    return out


def epsilon(i: int, x: UqElement) -> int:
    parts = i_decompose(i, x)
    if not parts:
        raise ValueError("epsilon of the zero element")
    return parts[0][0]


def kashiwara_F(i: int, x: UqElement) -> UqElement:
    alg = x.alg
    w = list(x.weight)
    w[i] += 1
    acc = alg.zero(w)
    for n, xn in i_decompose(i, x):
        acc = acc + alg.divided_power(i, n + 1) * xn
    return acc


def kashiwara_E(i: int, x: UqElement) -> UqElement:
    alg = x.alg
    w = list(x.weight)
    if not w[i]:
        return alg.zero(w)
    w[i] -= 1
    acc = alg.zero(w)
    for n, xn in i_decompose(i, x):
        if n >= 1:
            acc = acc + alg.divided_power(i, n - 1) * xn
    return acc


def lattice_check(x: UqElement) -> bool:
    """True iff (x, x) lies in A0 = Q[[q]] intersected with Q(q)."""
    if not x.terms:
        return True
    return membership(x.pair(x), "A0")


# ---------------------------------------------------------------------------
# expansion in almost orthonormal families

def gram_numerators(family) -> list:
    return [[b.pair_numerator(c) for c in family] for b in family]


def expand_in_family(x: UqElement, family, gram_num=None, bound=None, max_bound=64):
    """Coefficients ``a`` (LaurentPoly) with ``x == sum a_k family[k]``.

    ``family`` must be almost orthonormal: its Gram matrix is congruent to
    the identity modulo q.  The series solution is truncated at degree
    ``bound`` and checked exactly; the bound doubles until the check passes.
    Returns ``None`` if x is not a Laurent combination within ``max_bound``.
    """
    if not family:
        return [] if x.is_zero() else None
    alg = x.alg
    delta = alg.delta(x.weight)
    if gram_num is None:
        gram_num = gram_numerators(family)
    rhs = [b.pair_numerator(x) for b in family]
    if bound is None:
        bound = 4
    target = x.phi()
    while True:
        sol = series_solve(gram_num, rhs, delta, bound)
        coeffs = [LaurentPoly(s) for s in sol]
        acc = {}
        for a, b in zip(coeffs, family):
            if not a:
                continue
            for v, c in b.phi().items():
                term = c * a
                prev = acc.get(v)
                acc[v] = term if prev is None else prev + term
        acc = {v: c for v, c in acc.items() if c}
        if acc == target:
            return coeffs
        if bound >= max_bound:
            return None
        bound *= 2


def kernel_intersection_rank(basis_at, nu, p: int = 0) -> int:
    """Dimension of the common kernel of all ir inside U_nu.

    ``basis_at(weight)`` returns an almost orthonormal basis (a list of
    ``UqElement``) of that weight space, e.g. the canonical basis.  The
    matrix of ``x -> (ir_i x)_i`` in these coordinates is integral, so it can
    be reduced modulo p; the rank is taken over Q(q) or F_p(q).
    """
    nu = tuple(nu)
    if not any(nu):
        raise ValueError("weight must be nonzero")
    src = basis_at(nu)
    cols = []
    for b in src:
        col = []
        for i in range(len(nu)):
            if not nu[i]:
                continue
            tw = list(nu)
            tw[i] -= 1
            tgt = basis_at(tuple(tw))
            c = expand_in_family(b.ir(i), tgt)
            if c is None:
                raise ArithmeticError("ir image is not integral in the given basis")
            col.extend(c)
        cols.append(col)
    if p:
        cols = [[x.reduce(p) for x in col] for col in cols]
    rank = fraction_free_rank(cols, p) if cols and cols[0] else 0
    return len(src) - rank

