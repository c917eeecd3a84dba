"""Cartan data, diagram automorphisms, folding and unfolding.

Nodes are addressed internally by index ``0..n-1``; ``labels`` carries the
user-facing names.  Weights are tuples of nonnegative integers indexed the
same way (the sign is fixed by context: words of weight ``nu`` live in the
``-nu`` graded piece).
"""

import hashlib
import itertools
import json
from dataclasses import dataclass
from math import gcd

__all__ = [
    "CartanDatum", "DiagramAut", "FoldingChain", "fold", "unfold",
    "factor_automorphism", "fold_weight", "isomorphic", "validate",
    "is_admissible", "load_datum", "parse_aut",
]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class CartanDatum:
    """A finite index set with a symmetric integer form on the root lattice."""

    def __init__(self, labels, gram):
        labels = tuple(str(x) for x in labels)
        gram = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(labels)
        if len(gram) != n or any(len(row) != n for row in gram):
            raise ValueError("gram must be a square matrix matching the labels")
        if len(set(labels)) != n:
            raise ValueError("labels must be distinct")
        self.labels = labels
        self.gram = gram
        self._index = {lab: k for k, lab in enumerate(labels)}

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"unknown node label {label!r}") from None

    def d(self, i: int) -> int:
        return self.gram[i][i] // 2

    def a(self, i: int, j: int) -> int:
        """Cartan integer 2(a_i, a_j)/(a_i, a_i)."""
        return 2 * self.gram[i][j] // self.gram[i][i]

    def inner(self, u, v) -> int:
        """Form on weights given as coordinate tuples."""
        g = self.gram
        s = 0
        for i, ui in enumerate(u):
            if ui:
                row = g[i]
                for j, vj in enumerate(v):
                    if vj:
                        s += ui * vj * row[j]
        return s

    def is_symmetric_type(self) -> bool:
        return all(self.gram[i][i] == 2 for i in range(self.rank))

    def validate(self):
        """Return ``(ok, diagnostics)``."""
        diags = []
        n = self.rank
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    diags.append(f"asymmetric entry at ({self.labels[i]}, {self.labels[j]})")
                    return False, diags
        for i in range(n):
            gii = self.gram[i][i]
            if gii <= 0 or gii % 2:
                diags.append(f"diagonal entry at {self.labels[i]} is {gii}, not in 2Z>0")
                return False, diags
        for i in range(n):
            for j in range(n):
                if i != j:
                    num = 2 * self.gram[i][j]
                    gii = self.gram[i][i]
                    if num % gii or num > 0:
                        diags.append(
                            f"2(a_{self.labels[i]}, a_{self.labels[j]})/(a_{self.labels[i]}, "
                            f"a_{self.labels[i]}) = {num}/{gii} is not a nonpositive integer")
                        return False, diags
        return True, diags

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "gram": [list(r) for r in self.gram]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "CartanDatum":
        if "gram" not in data:
            raise ValueError("datum JSON needs a 'gram' field")
        gram = data["gram"]
        labels = data.get("labels") or [str(k + 1) for k in range(len(gram))]
        return cls(labels, gram)

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]

    def permuted(self, order) -> "CartanDatum":
        """The same datum with nodes listed in the given index order."""
        order = list(order)
        return CartanDatum([self.labels[k] for k in order],
                           [[self.gram[a][b] for b in order] for a in order])

    def canonical(self) -> "CartanDatum":
        """Nodes listed in sorted label order (natural order for numbers)."""
        return self.permuted(sorted(range(self.rank), key=lambda k: _label_key(self.labels[k])))

    def product(self, other: "CartanDatum") -> "CartanDatum":
        n, m = self.rank, other.rank
        gram = [[0] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                gram[i][j] = self.gram[i][j]
        for i in range(m):
            for j in range(m):
                gram[n + i][n + j] = other.gram[i][j]
        return CartanDatum(list(self.labels) + list(other.labels), gram)

    def __eq__(self, other):
        return isinstance(other, CartanDatum) and self.labels == other.labels and self.gram == other.gram

    def __hash__(self):
        return hash((self.labels, self.gram))

    def __repr__(self):
        return f"CartanDatum({list(self.labels)}, {[list(r) for r in self.gram]})"


def _label_key(label: str):
    parts = []
    for chunk in label.replace("+", ".").split("."):
        parts.append((0, int(chunk), "") if chunk.isdigit() else (1, 0, chunk))
    return tuple(parts)


def validate(datum: CartanDatum):
    return datum.validate()


def load_datum(path) -> CartanDatum:
    with open(path) as fh:
        return CartanDatum.from_dict(json.load(fh))


class DiagramAut:
    """A permutation ``perm[i] = sigma(i)`` of node indices."""

    def __init__(self, perm):
        perm = tuple(int(x) for x in perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{list(perm)} is not a permutation")
        self.perm = perm

    @classmethod
    def identity(cls, n: int) -> "DiagramAut":
        return cls(range(n))

    def __call__(self, i: int) -> int:
        return self.perm[i]

    def __len__(self):
        return len(self.perm)

    @property
    def order(self) -> int:
        out = 1
        for orb in self.orbits():
            out = _lcm(out, len(orb))
        return out

    def power(self, k: int) -> "DiagramAut":
        out = list(range(len(self.perm)))
        for _ in range(k % max(1, self.order)):
            out = [self.perm[x] for x in out]
        return DiagramAut(out)

    def inverse(self) -> "DiagramAut":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return DiagramAut(inv)

    def orbits(self):
        """Orbits as sorted tuples, ordered by smallest member."""
        seen = set()
        out = []
        for i in range(len(self.perm)):
            if i in seen:
                continue
            orb = [i]
            j = self.perm[i]
            while j != i:
                orb.append(j)
                j = self.perm[j]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return out

    def preserves(self, datum: CartanDatum) -> bool:
        g = datum.gram
        n = datum.rank
        return len(self.perm) == n and all(
            g[self.perm[i]][self.perm[j]] == g[i][j] for i in range(n) for j in range(n))

    def act_weight(self, nu) -> tuple:
        out = [0] * len(nu)
        for i, c in enumerate(nu):
            out[self.perm[i]] = c
        return tuple(out)

    def to_dict(self) -> dict:
        return {"perm": list(self.perm)}

    def __eq__(self, other):
        return isinstance(other, DiagramAut) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"DiagramAut({list(self.perm)})"


def parse_aut(text: str, datum: CartanDatum) -> DiagramAut:
    """Parse a comma list of target labels (``"3,2,1"``) or a JSON object
    ``{"perm": [target indices]}``."""
    text = text.strip()
    if text.startswith("{"):
        return DiagramAut(json.loads(text)["perm"])
    targets = [t.strip() for t in text.split(",") if t.strip()]
    if len(targets) != datum.rank:
        raise ValueError(f"automorphism lists {len(targets)} targets for {datum.rank} nodes")
    return DiagramAut([datum.index(t) for t in targets])


def is_admissible(datum: CartanDatum, aut: DiagramAut) -> bool:
    if not aut.preserves(datum):
        raise ValueError("permutation does not preserve the form")
    for orb in aut.orbits():
        for i, j in itertools.combinations(orb, 2):
            if datum.gram[i][j]:
                return False
    return True


def fold(datum: CartanDatum, aut: DiagramAut):
    """Induced datum on the orbit set, together with the list of orbits."""
    if not is_admissible(datum, aut):
        raise ValueError("automorphism is not admissible")
    orbits = aut.orbits()
    g = datum.gram
    gram = [[sum(g[i][j] for i in o1 for j in o2) for o2 in orbits] for o1 in orbits]
    labels = ["+".join(datum.labels[i] for i in orb) for orb in orbits]
    return CartanDatum(labels, gram), orbits


def fold_weight(nu, orbits) -> tuple:
    """Restrict a weight constant on orbits to the folded lattice."""
    out = []
    for orb in orbits:
        vals = {nu[i] for i in orb}
        if len(vals) != 1:
            raise ValueError(f"weight {tuple(nu)} is not constant on orbit {orb}")
        out.append(vals.pop())
    return tuple(out)


def unfold_weight(mu, orbits, n: int) -> tuple:
    out = [0] * n
    for c, orb in zip(mu, orbits):
        for i in orb:
            out[i] = c
    return tuple(out)


def unfold(datum: CartanDatum):
    """Symmetric datum with a cyclic automorphism that folds back to ``datum``.

    Node ``i`` is replaced by ``d_i`` nodes cycled by sigma; the
    ``c = -(a_i, a_j)/lcm(d_i, d_j)`` edges between the two blocks are put on
    the (sigma x sigma)-orbit of the pair of first nodes.
    """
    ok, diags = datum.validate()
    if not ok:
        raise ValueError("; ".join(diags))
    n = datum.rank
    nodes = []
    start = []
    for i in range(n):
        start.append(len(nodes))
        d = datum.d(i)
        for t in range(d):
            nodes.append((i, t))
    labels = [datum.labels[i] if datum.d(i) == 1 else f"{datum.labels[i]}.{t}" for i, t in nodes]
    m = len(nodes)
    gram = [[0] * m for _ in range(m)]
    for x in range(m):
        gram[x][x] = 2
    for i in range(n):
        for j in range(i + 1, n):
            gij = datum.gram[i][j]
            if not gij:
                continue
            di, dj = datum.d(i), datum.d(j)
            ell = _lcm(di, dj)
            c = -gij // ell
            for k in range(ell):
                x = start[i] + k % di
                y = start[j] + k % dj
                gram[x][y] -= c
                gram[y][x] -= c
    perm = []
    for i, t in nodes:
        perm.append(start[i] + (t + 1) % datum.d(i))
    return CartanDatum(labels, gram), DiagramAut(perm)


def isomorphic(x: CartanDatum, y: CartanDatum):
    """Return a node bijection ``x -> y`` preserving the form, or ``None``."""
    n = x.rank
    if y.rank != n:
        return None

    def inv(d, i):
        return (d.gram[i][i], tuple(sorted(d.gram[i])))

    ix = [inv(x, i) for i in range(n)]
    iy = [inv(y, i) for i in range(n)]
    if sorted(ix) != sorted(iy):
        return None
    order = sorted(range(n), key=lambda i: (sum(1 for k in range(n) if ix[k] == ix[i]), i))
    image = [-1] * n
    used = [False] * n

    def extend(pos):
        if pos == n:
            return True
        i = order[pos]
        for j in range(n):
            if used[j] or iy[j] != ix[i]:
                continue
            if all(x.gram[i][k] == y.gram[j][image[k]] for k in order[:pos]):
                image[i] = j
                used[j] = True
                if extend(pos + 1):
                    return True
                used[j] = False
                image[i] = -1
        return False

    return list(image) if extend(0) else None


def _prime_factors(n: int):
    out = []
    f = 2
    while f * f <= n:
        while n % f == 0:
            out.append(f)
            n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_prime_power(n: int) -> bool:
    return n > 1 and len(set(_prime_factors(n))) == 1


@dataclass
class Stage:
    datum: CartanDatum
    aut: DiagramAut
    members: list  # original node sets, one per node of ``datum``

    def to_dict(self) -> dict:
        return {"datum": self.datum.to_dict(), "perm": list(self.aut.perm),
                "members": [sorted(m) for m in self.members]}


@dataclass
class FoldingChain:
    source: CartanDatum
    aut: DiagramAut
    stages: list

    def final(self):
        """Datum after the last stage and its original node sets."""
        if not self.stages:
            return self.source, [frozenset([i]) for i in range(self.source.rank)]
        last = self.stages[-1]
        folded, orbits = fold(last.datum, last.aut)
        members = [frozenset().union(*(last.members[k] for k in orb)) for orb in orbits]
        return folded, members

    def verify(self) -> dict:
        """Check stage orders, admissibility and that refolding agrees with
        one-step folding along the original automorphism."""
        ok_orders = all(is_prime_power(s.aut.order) for s in self.stages)
        ok_adm = all(is_admissible(s.datum, s.aut) for s in self.stages)
        final, members = self.final()
        target, orbits = fold(self.source, self.aut)
        same_partition = sorted(sorted(m) for m in members) == sorted(sorted(o) for o in orbits)
        iso = isomorphic(final, target) is not None
        return {"prime_power_orders": ok_orders, "admissible": ok_adm,
                "orbit_partition": same_partition, "refold_isomorphic": iso,
                "ok": ok_orders and ok_adm and same_partition and iso}

    def to_dict(self) -> dict:
        final, members = self.final()
        return {"source": self.source.to_dict(), "perm": list(self.aut.perm),
                "stages": [s.to_dict() for s in self.stages],
                "final": final.to_dict(), "final_members": [sorted(m) for m in members]}


def factor_automorphism(datum: CartanDatum, aut: DiagramAut) -> FoldingChain:
    """Factor folding along ``aut`` into stages of prime-power order."""
    if not is_admissible(datum, aut):
        raise ValueError("automorphism is not admissible")
    stages = _chain(datum, aut, [frozenset([i]) for i in range(datum.rank)])
    return FoldingChain(datum, aut, stages)


def _chain(datum, aut, members):
    n = aut.order
    if n == 1:
        return []
    if is_prime_power(n):
        return [Stage(datum, aut, list(members))]
    p = min(_prime_factors(n))
    m = 1
    while n % (m * p) == 0:
        m *= p
    tau = aut.power(m)
    head = _chain(datum, tau, members)
    if head:
        last = head[-1]
        folded, orbits = fold(last.datum, last.aut)
        new_members = [frozenset().union(*(last.members[k] for k in orb)) for orb in orbits]
    else:
        folded, new_members = datum, list(members)
    # induced automorphism: node with member set S goes to the node containing sigma(S)
    where = {}
    for k, mem in enumerate(new_members):
        for i in mem:
            where[i] = k
    perm = []
    for mem in new_members:
        img = {aut(i) for i in mem}
        targets = {where[i] for i in img}
        if len(targets) != 1:
            raise RuntimeError("induced map is not well defined on orbits")
        perm.append(targets.pop())
    return head + [Stage(folded, DiagramAut(perm), new_members)]
