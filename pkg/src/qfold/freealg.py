"""The free algebra on generators f_i with its q-derivations and form.

Words are tuples of node indices.  A ``FreeElement`` is a homogeneous
linear combination of words with ``LaurentPoly`` or ``RatFunc``
coefficients.

For words ``v, w`` of the same weight nu the form is

    (v, w) = N(v, w) / prod_t (1 - q^{2 d_{v_t}}),

and the numerator obeys the left-peel recursion
``N(i v', w) = sum_t q^{-(a_{w_1} + ... + a_{w_{t-1}}, a_i)} N(v', w - t)``
over positions ``t`` of ``w`` carrying the letter ``i``.
"""

import itertools
import json

from .cartan import CartanDatum
from .qarith import ONE, LaurentPoly, Q, RatFunc

__all__ = ["FreeElement", "word_weight", "word_form_numerator", "form_denominator",
           "bilinear_form", "coproduct_r", "words_of_weight"]


def word_weight(word, n: int) -> tuple:
    w = [0] * n
    for i in word:
        w[i] += 1
    return tuple(w)


def words_of_weight(nu) -> list:
    """All words of weight ``nu`` in lexicographic order."""
    letters = []
    for i, c in enumerate(nu):
        letters.extend([i] * c)
    out = sorted(set(itertools.permutations(letters)))
    return out


def form_denominator(datum: CartanDatum, nu) -> LaurentPoly:
    out = ONE
    for i, c in enumerate(nu):
        if c:
            out = out * (ONE - Q(2 * datum.d(i))) ** c
    return out


_NUM_CACHE = {}


def word_form_numerator(datum: CartanDatum, v: tuple, w: tuple) -> LaurentPoly:
    """The numerator N(v, w) of the form on two words (memoized)."""
    cache = _NUM_CACHE.setdefault(datum, {})
    return _num(datum.gram, cache, tuple(v), tuple(w))


def _num(g, cache, v, w):
    key = (v, w)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if len(v) != len(w):
        res = LaurentPoly()
    elif not v:
        res = ONE
    elif sorted(v) != sorted(w):
        res = LaurentPoly()
    else:
        i = v[0]
        rest = v[1:]
        res = LaurentPoly()
        e = 0
        for t, j in enumerate(w):
            if j == i:
                res = res + _num(g, cache, rest, w[:t] + w[t + 1:]).shift(-e)
            e += g[j][i]
    cache[key] = res
    return res


class FreeElement:
    """Homogeneous element of the free algebra."""

    __slots__ = ("datum", "weight", "terms")

    def __init__(self, datum: CartanDatum, terms=None, weight=None):
        self.datum = datum
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if isinstance(c, int):
                c = LaurentPoly(c)
            if c:
                clean[w] = c
        if weight is None:
            if not clean:
                raise ValueError("zero element needs an explicit weight")
            weights = {word_weight(w, datum.rank) for w in clean}
            if len(weights) != 1:
                raise ValueError("element is not homogeneous")
            weight = weights.pop()
        else:
            weight = tuple(weight)
            for w in clean:
                if word_weight(w, datum.rank) != weight:
                    raise ValueError("word does not have the declared weight")
        self.weight = weight
        self.terms = clean

    @classmethod
    def word(cls, datum, word, coeff=1) -> "FreeElement":
        word = tuple(word)
        return cls(datum, {word: coeff}, word_weight(word, datum.rank))

    @classmethod
    def one(cls, datum) -> "FreeElement":
        return cls.word(datum, ())

    @classmethod
    def gen(cls, datum, i: int) -> "FreeElement":
        return cls.word(datum, (i,))

    def zero_like(self, weight=None) -> "FreeElement":
        return FreeElement(self.datum, {}, self.weight if weight is None else weight)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.datum != other.datum:
            raise ValueError("datum mismatch")

    def __add__(self, other):
        self._check(other)
        if self.weight != other.weight and self.terms and other.terms:
            raise ValueError("adding elements of different weights")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        weight = self.weight if self.terms else other.weight
        return FreeElement(self.datum, out, weight)

    def __neg__(self):
        return FreeElement(self.datum, {w: -c for w, c in self.terms.items()}, self.weight)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FreeElement":
        return FreeElement(self.datum, {w: x * c for w, x in self.terms.items()}, self.weight)

    def __mul__(self, other):
        if not isinstance(other, FreeElement):
            return self.scale(other)
        self._check(other)
        out = {}
        for (w1, c1), (w2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            w = w1 + w2
            c = c1 * c2
            out[w] = out[w] + c if w in out else c
        weight = tuple(a + b for a, b in zip(self.weight, other.weight))
        return FreeElement(self.datum, out, weight)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.datum == other.datum and self.weight == other.weight and (self - other).is_zero()

    def __hash__(self):
        return hash((self.weight, frozenset(self.terms)))

    def star(self) -> "FreeElement":
        return FreeElement(self.datum, {tuple(reversed(w)): c for w, c in self.terms.items()}, self.weight)

    def bar(self) -> "FreeElement":
        return FreeElement(self.datum, {w: c.bar() for w, c in self.terms.items()}, self.weight)

    def act(self, perm) -> "FreeElement":
        """Relabel letters by ``perm[i]`` (a datum automorphism)."""
        perm = tuple(perm)
        terms = {tuple(perm[i] for i in w): c for w, c in self.terms.items()}
        weight = [0] * len(self.weight)
        for i, c in enumerate(self.weight):
            weight[perm[i]] = c
        return FreeElement(self.datum, terms, weight)

    def derivation_ir(self, i: int) -> "FreeElement":
        g = self.datum.gram
        out = {}
        for w, c in self.terms.items():
            e = 0
            for t, j in enumerate(w):
                if j == i:
                    nw = w[:t] + w[t + 1:]
                    term = c * Q(-e)
                    out[nw] = out[nw] + term if nw in out else term
                e += g[j][i]
        weight = list(self.weight)
        weight[i] -= 1
        if weight[i] < 0:
            return FreeElement(self.datum, {}, tuple(0 if k == i else x for k, x in enumerate(weight)))
        return FreeElement(self.datum, out, weight)

    def derivation_ri(self, i: int) -> "FreeElement":
        return self.star().derivation_ir(i).star()

    def to_dict(self) -> dict:
        return {
            "weight": {self.datum.labels[k]: c for k, c in enumerate(self.weight) if c},
            "terms": [{"word": [self.datum.labels[k] for k in w], "coeff": str(c)}
                      for w, c in sorted(self.terms.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, datum: CartanDatum, data: dict) -> "FreeElement":
        weight = [0] * datum.rank
        for lab, c in data.get("weight", {}).items():
            weight[datum.index(lab)] = int(c)
        terms = {}
        for t in data["terms"]:
            word = tuple(datum.index(x) for x in t["word"])
            c = RatFunc.from_text(t["coeff"])
            terms[word] = c.as_laurent() if c.den.coeffs == (1,) else c
        return cls(datum, terms, weight)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items()):
            word = "".join(f"f{self.datum.labels[k]}" for k in w) or "1"
            parts.append(f"({c})*{word}")
        return " + ".join(parts)


def bilinear_form(x: FreeElement, y: FreeElement) -> RatFunc:
    """Lusztig's form via the memoized left-peel recursion."""
    if x.datum != y.datum:
        raise ValueError("datum mismatch")
    if x.weight != y.weight or x.is_zero() or y.is_zero():
        return RatFunc(0)
    total = None
    for v, cv in x.terms.items():
        for w, cw in y.terms.items():
            n = word_form_numerator(x.datum, v, w)
            if n:
                term = cv * cw * n
                total = term if total is None else total + term
    if total is None:
        return RatFunc(0)
    return RatFunc.lift(total) / RatFunc(form_denominator(x.datum, x.weight))


def coproduct_r(x: FreeElement) -> dict:
    """Twisted coproduct as a map (word1, word2) -> coefficient.

    Multiplicative for (x1 (x) x2)(y1 (x) y2) = q^{-(wt x2, wt y1)} x1 y1 (x) x2 y2
    with r(f_i) = f_i (x) 1 + 1 (x) f_i.
    """
    g = x.datum.gram
    out = {}
    for w, c in x.terms.items():
        n = len(w)
        for mask in range(1 << n):
            left = tuple(w[t] for t in range(n) if mask >> t & 1)
            right = tuple(w[t] for t in range(n) if not mask >> t & 1)
            e = 0
            for s in range(n):
                if mask >> s & 1:
                    for t in range(s):
                        if not mask >> t & 1:
                            e += g[w[t]][w[s]]
            key = (left, right)
            term = c * Q(-e)
            out[key] = out[key] + term if key in out else term
    return {k: v for k, v in out.items() if v}
