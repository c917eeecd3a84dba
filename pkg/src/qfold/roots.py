"""Positive roots of finite type by reflection closure, and Kostant's
partition function.  Used as an independent dimension oracle."""

from functools import lru_cache

from .cartan import CartanDatum


def positive_roots(datum: CartanDatum, limit: int = 10_000) -> list:
    """Positive roots as coordinate tuples, closed under simple reflections.

    Raises if the closure exceeds ``limit`` (the datum is not of finite type).
    """
    n = datum.rank
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for i in range(n):
                # s_i(r) = r - <r, a_i^vee> a_i
                c = 2 * datum.inner(r, simple[i]) // datum.gram[i][i]
                img = tuple(x - (c if k == i else 0) for k, x in enumerate(r))
                if min(img) >= 0 and any(img) and img not in seen:
                    seen.add(img)
                    nxt.append(img)
        if len(seen) > limit:
            raise ValueError("root closure does not terminate; datum is not of finite type")
        frontier = nxt
    return sorted(seen, key=lambda r: (sum(r), r))


def kostant_count(datum: CartanDatum, nu) -> int:
    """Number of multisets of positive roots summing to ``nu``."""
    roots = positive_roots(datum)

    @lru_cache(maxsize=None)
    def count(rest, k):
        if not any(rest):
            return 1
        if k == len(roots):
            return 0
        r = roots[k]
        total = 0
        cur = rest
        while min(cur) >= 0:
            total += count(cur, k + 1)
            cur = tuple(a - b for a, b in zip(cur, r))
        return total

    return count(tuple(nu), 0)
