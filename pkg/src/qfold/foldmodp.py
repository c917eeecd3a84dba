"""Folding modulo p: the orbit algebra V_q and its comparison with the
algebra of the folded datum.

Setting: sigma has order a power of p.  For a sigma-fixed weight nu the
quotient ``V_q = (A' U^sigma) / J`` has the basis ``pi(B^sigma)``.  A
sigma-fixed integral element x expands in B with coordinates constant on
sigma-orbits, so

    x = sum_{b fixed} c_b b + sum_{free orbits O} c_O O(b),

and its image in V_q is the vector ``(c_b mod p)`` over fixed b.  The orbit
sums O(b) span J in that weight.

``Phi`` sends a divided monomial of the folded algebra to the image of the
matching product of ``f~_eta^{(a)} = prod_{i in eta} f_i^{(a)}``.
"""

import itertools
from dataclasses import dataclass

from .canon import canonical_basis, sigma_on_basis, weights_up_to
from .cartan import (CartanDatum, DiagramAut, fold, fold_weight, is_admissible,
                     is_prime_power, unfold_weight)
from .qarith import ONE, LaurentPoly, is_prime, qbinom, qfact
from .report import Report
from .uqminus import UqElement

__all__ = ["FoldContext", "VqElement", "chain_xi", "folded_monomials", "verify_fold"]


def folded_monomials(n: int, mu) -> list:
    """All divided monomials (block sequences, neighbours distinct) of weight mu."""
    out = []

    def rec(rest, last, acc):
        if not any(rest):
            out.append(tuple(acc))
            return
        for k in range(n):
            if k == last or not rest[k]:
                continue
            for a in range(1, rest[k] + 1):
                rest[k] -= a
                acc.append((k, a))
                rec(rest, k, acc)
                acc.pop()
                rest[k] += a

    rec(list(mu), None, [])
    return sorted(out)


@dataclass
class VqElement:
    """Vector over pi(B^sigma) at one sigma-fixed weight, entries in F_p[q, q^-1]."""
    weight: tuple
    coords: tuple

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other):
        if self.weight != other.weight:
            raise ValueError("weight mismatch")
        return VqElement(self.weight, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        if self.weight != other.weight:
            raise ValueError("weight mismatch")
        return VqElement(self.weight, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c: LaurentPoly):
        return VqElement(self.weight, tuple(x * c for x in self.coords))

    def to_dict(self) -> dict:
        return {"weight": list(self.weight), "coords": [str(c) for c in self.coords]}


class OrbitError(ArithmeticError):
    pass


class FoldContext:
    """Everything needed to compare V_q with the folded algebra.

    ``datum`` and ``aut`` are given in any node order; internally both
    tables use sorted labels.
    """

    def __init__(self, datum: CartanDatum, aut: DiagramAut, p: int, height: int,
                 jobs: int = 1, extra_targets=(), order_seed=None, cache_dir=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        order = aut.order
        if order > 1 and (not is_prime_power(order) or order % p):
            raise ValueError(f"order {order} of the automorphism is not a power of {p}")
        if not is_admissible(datum, aut):
            raise ValueError("automorphism is not admissible")
        self.p = p
        self.height = height
        X = datum.canonical()
        perm = [0] * X.rank
        for i in range(datum.rank):
            perm[X.index(datum.labels[i])] = X.index(datum.labels[aut(i)])
        self.aut = DiagramAut(perm)
        self.X = X
        folded, orbits = fold(X, self.aut)
        self.orbits = orbits
        self.folded = folded
        n = X.rank
        targets = weights_up_to(n, height) + [tuple(t) for t in extra_targets]
        top = max(sum(t) for t in targets)
        self.table = canonical_basis(X, top, jobs=jobs, targets=targets,
                                     order_seed=order_seed, cache_dir=cache_dir)
        ftargets = [fold_weight(t, orbits) for t in targets if self.aut.act_weight(t) == t]
        self.ftable = canonical_basis(folded, max(sum(t) for t in ftargets), jobs=jobs,
                                      targets=_to_ftable(ftargets, folded),
                                      order_seed=order_seed, cache_dir=cache_dir)
        # folded-table index -> orbit (tuple of X indices)
        fd = self.ftable.datum
        self.orbit_of = [orbits[folded.index(lab)] for lab in fd.labels]
        self.perm, self.fixed, self.sigma_report = sigma_on_basis(self.table, self.aut)

    # ---- weights ------------------------------------------------------
    def fixed_weights(self, height=None) -> list:
        H = self.height if height is None else height
        return [w for w in self.table.weights() if sum(w) <= H and self.aut.act_weight(w) == w]

    def fold_w(self, nu) -> tuple:
        """sigma-fixed weight of X -> weight in the folded table's labelling."""
        return tuple(nu[orb[0]] for orb in self.orbit_of)

    def unfold_w(self, mu) -> tuple:
        out = [0] * self.X.rank
        for c, orb in zip(mu, self.orbit_of):
            for i in orb:
                out[i] = c
        return tuple(out)

    # ---- the projection pi ------------------------------------------------
    def orbit_classes(self, nu) -> list:
        """sigma-orbits on B_nu as sorted index tuples."""
        seen = set()
        out = []
        for k in range(len(self.table[nu])):
            if k in seen:
                continue
            orb = [k]
            cur = self.perm[(nu, k)][1]
            while cur != k:
                orb.append(cur)
                cur = self.perm[(nu, cur)][1]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return sorted(out)

    def pi(self, x: UqElement) -> VqElement:
        """Image in V_q of a sigma-fixed integral element."""
        nu = x.weight
        coeffs = self.table.expand(x)
        for orb in self.orbit_classes(nu):
            vals = {coeffs[k] for k in orb}
            if len(vals) != 1:
                raise OrbitError(f"coordinates not constant on the orbit {orb} at weight {nu}")
        return VqElement(nu, tuple(coeffs[k].reduce(self.p) for k in self.fixed[nu]))

    def tilde(self, mono) -> UqElement:
        """prod of f~_eta^{(a)} for a folded monomial ((k, a), ...)."""
        alg = self.table.alg
        x = alg.one()
        for k, a in mono:
            for i in self.orbit_of[k]:
                x = x * alg.divided_power(i, a)
        return x

    def tilde_element(self, y: UqElement) -> UqElement:
        """Lift of a folded-algebra element (Laurent combination of monomials)."""
        nu = self.unfold_w(y.weight)
        acc = self.table.alg.zero(nu)
        for m, c in sorted(y.terms.items()):
            acc = acc + self.tilde(m).scale(c)
        return acc

    def Phi(self, y: UqElement) -> VqElement:
        return self.pi(self.tilde_element(y))

    def g_eta(self, k: int, a: int) -> VqElement:
        return self.pi(self.tilde(((k, a),) if a else ()))

    def vq_multiply(self, x: VqElement, y: VqElement) -> VqElement:
        lift_x = self._lift(x)
        lift_y = self._lift(y)
        return self.pi(lift_x * lift_y)

    def _lift(self, x: VqElement) -> UqElement:
        basis = self.table.basis(x.weight)
        acc = self.table.alg.zero(x.weight)
        for k, c in zip(self.fixed[x.weight], x.coords):
            if c:
                acc = acc + basis[k].scale(c.lift())
        return acc

    # ---- checks ----------------------------------------------------------
    def ideal_J_coords(self, nu, rep: Report = None) -> dict:
        """Non-fixed orbits spanning J at nu; checks two-sided stability under
        every f~_eta."""
        nu = tuple(nu)
        free = [orb for orb in self.orbit_classes(nu) if len(orb) > 1]
        basis = self.table.basis(nu)
        bad = []
        for orb in free:
            o = basis[orb[0]]
            for k in orb[1:]:
                o = o + basis[k]
            for e in range(len(self.orbit_of)):
                t = self.tilde(((e, 1),))
                if sum(nu) + sum(t.weight) > self.table.height:
                    continue
                up = tuple(a + b for a, b in zip(nu, t.weight))
                if up not in self.table.elements:
                    continue
                for prod in (t * o, o * t):
                    if not self.pi(prod).is_zero():
                        bad.append([list(nu), list(orb), e])
        if rep is not None:
            rep.add("orbit sums span a two-sided ideal", not bad, weight=list(nu), failures=bad)
        return {"weight": list(nu), "free_orbits": [list(o) for o in free], "dimension": len(free)}

    def verify_phi_relations(self, rep: Report = None) -> Report:
        rep = rep or Report("folded Serre relations in V_q")
        fd = self.ftable.datum
        nf = fd.rank
        p = self.p
        for e, e2 in itertools.permutations(range(nf), 2):
            L = 1 - fd.a(e, e2)
            d = fd.d(e)
            mu = [0] * nf
            mu[e] = L
            mu[e2] += 1
            nu = self.unfold_w(mu)
            if nu not in self.table.elements:
                rep.add("folded Serre relation", False, pair=[fd.labels[e], fd.labels[e2]],
                        reason="weight not computed")
                continue
            alg = self.table.alg
            acc = alg.zero(nu)
            for k in range(L + 1):
                x = alg.one()
                for _ in range(k):
                    x = x * self.tilde(((e, 1),))
                x = x * self.tilde(((e2, 1),))
                for _ in range(L - k):
                    x = x * self.tilde(((e, 1),))
                acc = acc + x.scale(qbinom(L, k, d).scale((-1) ** k))
            img = self.pi(acc)
            rep.add("folded Serre relation vanishes in V_q", img.is_zero(),
                    pair=[fd.labels[e], fd.labels[e2]], L=L)
        # divided powers: [a]!_{d_eta} g^(a) = g^a
        for e in range(nf):
            d = fd.d(e)
            for a in range(2, self.height + 1):
                if a * len(self.orbit_of[e]) > self.height:
                    break
                lhs = self.g_eta(e, a).scale(qfact(a, d).reduce(p))
                x = self.table.alg.one()
                for _ in range(a):
                    x = x * self.tilde(((e, 1),))
                rhs = self.pi(x)
                rep.add("divided power relation in V_q", (lhs - rhs).is_zero(),
                        eta=fd.labels[e], a=a)
        return rep

    def verify_isometry(self, rep: Report = None) -> Report:
        rep = rep or Report("isometry of Phi")
        p = self.p
        falg = self.ftable.alg
        nf = self.ftable.datum.rank
        for nu in self.fixed_weights():
            mu = self.fold_w(nu)
            monos = folded_monomials(nf, mu)
            lifts = [self.tilde(m) for m in monos]
            fel = [UqElement(falg, {m: ONE}, mu) for m in monos]
            D = self.table.alg.delta(nu).reduce(p)
            Df = falg.delta(mu).reduce(p)
            bad = []
            for s, t in itertools.combinations_with_replacement(range(len(monos)), 2):
                N = lifts[s].pair_numerator(lifts[t]).reduce(p)
                Nf = fel[s].pair_numerator(fel[t]).reduce(p)
                if N * Df != Nf * D:
                    bad.append([s, t])
            rep.add("Phi preserves the form", not bad, weight=list(nu), pairs=len(monos) * (len(monos) + 1) // 2,
                    failures=bad[:10])
        return rep

    def verify_dimensions(self, rep: Report = None) -> Report:
        from .linalg import fraction_free_rank
        rep = rep or Report("dimensions")
        for nu in self.fixed_weights():
            mu = self.fold_w(nu)
            nfix = len(self.fixed[nu])
            nfold = len(self.ftable[mu])
            rep.add("dim V_q equals folded dimension", nfix == nfold, weight=list(nu),
                    fixed=nfix, folded=nfold)
            g = [[x.reduce(self.p) for x in row] for row in self.ftable.gram_num(mu)]
            rk = fraction_free_rank(g, self.p)
            rep.add("folded form non-degenerate mod p", rk == nfold, weight=list(nu), rank=rk)
        return rep

    def xi(self, nu) -> dict:
        """Match B^sigma_nu with the folded basis: fixed index -> (folded index, sign)."""
        nu = tuple(nu)
        mu = self.fold_w(nu)
        out = {}
        for k, fb in enumerate(self.ftable[mu]):
            img = self.Phi(fb.elem)
            nz = [(t, c) for t, c in enumerate(img.coords) if c]
            if len(nz) != 1 or not nz[0][1].is_constant():
                raise OrbitError(f"image of folded element {k} at {mu} is not a signed basis vector")
            t, c = nz[0]
            sign = c.coeffs[0]
            sign = 1 if sign == 1 else -1
            if self.fixed[nu][t] in out:
                raise OrbitError("two folded elements map to the same fixed element")
            out[self.fixed[nu][t]] = (k, sign)
        return out

    def verify_xi(self, rep: Report = None) -> Report:
        rep = rep or Report("xi bijection")
        maps = {}
        for nu in self.fixed_weights():
            try:
                m = self.xi(nu)
            except OrbitError as err:
                rep.add("xi is a bijection", False, weight=list(nu), error=str(err))
                continue
            maps[nu] = m
            ok = sorted(m) == sorted(self.fixed[nu]) and len(m) == len(self.ftable[self.fold_w(nu)])
            rep.add("xi is a bijection", ok, weight=list(nu), size=len(m))
            if self.p != 2:
                rep.add("xi is sign-free", all(s == 1 for _, s in m.values()), weight=list(nu))
            # star compatibility
            badstar = []
            for k, (fk, _) in m.items():
                sk = self.table.lookup(self.table[nu][k].elem.star())
                fsk = self.ftable.lookup(self.ftable[self.fold_w(nu)][fk].elem.star())
                if sk is None or fsk is None or m.get(sk, (None,))[0] != fsk:
                    badstar.append(k)
            rep.add("xi intertwines star", not badstar, weight=list(nu), failures=badstar)
        # crystal equivariance: xi(F~_eta b) = F_eta xi(b)
        bad = []
        for nu, m in maps.items():
            for k, (fk, _) in m.items():
                for e, orb in enumerate(self.orbit_of):
                    up = list(nu)
                    for i in orb:
                        up[i] += 1
                    up = tuple(up)
                    if up not in maps:
                        continue
                    # prod_{i in eta} F_i on B
                    cur_nu, cur = nu, k
                    for i in orb:
                        a, par = self.table.pi_inverse(cur_nu, cur, i)
                        nxt = list(cur_nu)
                        nxt[i] += 1
                        nxt = tuple(nxt)
                        cur = self.table.pi[(nxt, i, a + 1, par)]
                        cur_nu = nxt
                    mu = self.fold_w(nu)
                    fa, fpar = self.ftable.pi_inverse(mu, fk, e)
                    fup = list(mu)
                    fup[e] += 1
                    ftarget = self.ftable.pi[(tuple(fup), e, fa + 1, fpar)]
                    if maps[up].get(cur, (None,))[0] != ftarget:
                        bad.append([list(nu), k, e])
        rep.add("xi intertwines the crystal operators", not bad, failures=bad)
        return rep, maps

    def verify_decomposition(self, rep: Report = None) -> Report:
        rep = rep or Report("eta decompositions")
        for nu in self.fixed_weights():
            elems = self.table[nu]
            fixed = self.fixed[nu]
            for e, orb in enumerate(self.orbit_of):
                const = all(len({elems[k].eps[i] for i in orb}) == 1 for k in fixed)
                rep.add("epsilon constant on orbits", const, weight=list(nu), eta=e)
                if not const:
                    continue
                groups = {}
                for k in fixed:
                    groups.setdefault(elems[k].eps[orb[0]], []).append(k)
                rep.add("eta grading partitions B^sigma",
                        sum(len(v) for v in groups.values()) == len(fixed), weight=list(nu), eta=e)
                # f~_eta^(a) b for b with eps_eta = 0 lands on pi_{eta,a}(b) modulo higher eps
                bad = []
                for a in range(1, self.height - sum(nu) + 1):
                    up = list(nu)
                    for i in orb:
                        up[i] += a
                    up = tuple(up)
                    if up not in self.table.elements:
                        break
                    for k in groups.get(0, []):
                        img = self.pi(self.tilde(((e, a),)) * elems[k].elem)
                        cur_nu, cur = nu, k
                        for i in orb:
                            nxt = list(cur_nu)
                            nxt[i] += a
                            nxt = tuple(nxt)
                            cur = self.table.pi[(nxt, i, a, cur)]
                            cur_nu = nxt
                        ok = True
                        for t, c in zip(self.fixed[up], img.coords):
                            epsv = self.table[up][t].eps[orb[0]]
                            if t == cur:
                                ok &= c == LaurentPoly(1, self.p)
                            elif c:
                                ok &= epsv > a
                        if not ok:
                            bad.append([list(nu), k, a])
                rep.add("f~_eta^(a) acts triangularly on the eta grading", not bad,
                        weight=list(nu), eta=e, failures=bad)
        return rep


def _to_ftable(ftargets, folded: CartanDatum):
    """Re-index folded weights from fold() order to sorted-label order."""
    can = folded.canonical()
    order = [folded.index(lab) for lab in can.labels]
    return [tuple(t[k] for k in order) for t in ftargets]


def serre_targets(datum: CartanDatum, aut: DiagramAut) -> list:
    """Weights (in sorted-label order) where the folded Serre relations live."""
    X = datum.canonical()
    perm = [0] * X.rank
    for i in range(datum.rank):
        perm[X.index(datum.labels[i])] = X.index(datum.labels[aut(i)])
    folded, orbits = fold(X, DiagramAut(perm))
    out = []
    for e, e2 in itertools.permutations(range(folded.rank), 2):
        L = 1 - folded.a(e, e2)
        mu = [0] * folded.rank
        mu[e] = L
        mu[e2] += 1
        out.append(unfold_weight(mu, orbits, X.rank))
    return out


def verify_fold(datum: CartanDatum, aut: DiagramAut, p: int, height: int, jobs: int = 1,
                relations: bool = True, order_seed=None, cache_dir=None) -> tuple:
    """Run the whole suite; returns (report, context)."""
    extra = serre_targets(datum, aut) if relations else []
    ctx = FoldContext(datum, aut, p, height, jobs=jobs, extra_targets=extra,
                      order_seed=order_seed, cache_dir=cache_dir)
    rep = Report(f"fold {list(ctx.X.labels)} by {list(ctx.aut.perm)} mod {p}")
    rep.extend(ctx.sigma_report)
    if relations:
        ctx.verify_phi_relations(rep)
    ctx.verify_isometry(rep)
    ctx.verify_dimensions(rep)
    for nu in ctx.fixed_weights():
        ctx.ideal_J_coords(nu, rep)
    xrep, _ = ctx.verify_xi()
    rep.extend(xrep)
    ctx.verify_decomposition(rep)
    return rep, ctx


def _label_set(label: str) -> frozenset:
    return frozenset(label.split("+"))


def chain_xi(datum: CartanDatum, aut: DiagramAut, height: int, jobs: int = 1) -> tuple:
    """Compose the stage matchings of a prime-power factorization of ``aut``.

    Each stage is folded at the prime dividing its order.  A basis element
    fixed by the whole automorphism is followed through every stage; at each
    step the fixed part must land exactly on the part fixed by the next
    stage.  Returns ``(report, maps)`` with ``maps[nu][k] = (index, sign)``
    into the basis of the final folded datum.
    """
    from .cartan import factor_automorphism
    chain = factor_automorphism(datum, aut)
    rep = Report(f"folding chain of order {aut.order}")
    rep.add("chain of prime-power stages", chain.verify()["ok"],
            orders=[s.aut.order for s in chain.stages])
    ctxs = []
    for st in chain.stages:
        o = st.aut.order
        p = min(x for x in range(2, o + 1) if o % x == 0)
        ctxs.append(FoldContext(st.datum, st.aut, p, height, jobs=jobs))
    if not ctxs:
        return rep, {}
    first = ctxs[0]
    X = first.X
    perm = [0] * X.rank
    for i in range(datum.rank):
        perm[X.index(datum.labels[i])] = X.index(datum.labels[aut(i)])
    _, fixed, srep = sigma_on_basis(first.table, DiagramAut(perm))
    rep.extend(srep)
    maps = {}
    for nu in first.fixed_weights():
        if DiagramAut(perm).act_weight(nu) != nu:
            continue
        cur = {k: (k, 1) for k in fixed[nu]}
        w = nu
        ok = True
        for s, ctx in enumerate(ctxs):
            m = ctx.xi(w)
            if not set(cur_v[0] for cur_v in cur.values()) <= set(m):
                ok = False
                break
            cur = {k: (m[v][0], sgn * m[v][1]) for k, (v, sgn) in cur.items()}
            mu = ctx.fold_w(w)
            if s + 1 < len(ctxs):
                nxt = ctxs[s + 1]
                where = {_label_set(lab): c for lab, c in zip(ctx.ftable.datum.labels, mu)}
                w = tuple(where[_label_set(lab)] for lab in nxt.X.labels)
                image = sorted(v for v, _ in cur.values())
                ok &= nxt.aut.act_weight(w) == w and image == sorted(nxt.fixed[w])
            else:
                w = mu
        size = len(ctxs[-1].ftable[w]) if ok else -1
        ok &= sorted(v for v, _ in cur.values()) == list(range(size))
        rep.add("composite matching is a bijection onto the final basis", ok,
                weight=list(nu), size=len(cur))
        if ok:
            maps[nu] = dict(sorted(cur.items()))
    return rep, maps
