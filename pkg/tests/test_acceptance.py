"""Acceptance suite: one test per criterion, each with its time budget.

Every test records a PASS/FAIL line; the lines are printed together at the
end of the pytest run (see ``conftest.pytest_terminal_summary``).
"""

import itertools
import time

import pytest

import qfold.qidents as Q
from qfold.canon import (a2_monomial_model, canonical_basis, monomial_reachability,
                         signed_basis_scan, verify_axioms, verify_commuting_projections,
                         verify_crystal_congruences, verify_star_stability)
from qfold.cartan import CartanDatum, DiagramAut
from qfold.foldmodp import verify_fold
from qfold.qarith import verify_gauss_identities
from qfold.report import Report
from qfold.uqminus import kernel_intersection_rank, serre_check, weight_space

from conftest import ACCEPTANCE_LINES, aut, datum

MIN = 60.0


class Clock:
    def __init__(self, number: int, label: str, limit: float):
        self.number, self.label, self.limit = number, label, limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def finish(self, ok: bool, note: str = "") -> None:
        dt = time.perf_counter() - self.t0
        passed = bool(ok) and dt < self.limit
        extra = f"; {note}" if note else ""
        ACCEPTANCE_LINES.append(
            f"{'PASS' if passed else 'FAIL'} criterion {self.number:2d} {self.label}: "
            f"{dt:.2f}s (limit {self.limit:g}s){extra}")
        assert ok, f"criterion {self.number} failed{extra}"
        assert dt < self.limit, f"criterion {self.number} took {dt:.1f}s"

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None and exc_type is not AssertionError:
            ACCEPTANCE_LINES.append(f"FAIL criterion {self.number:2d} {self.label}: {exc_type.__name__}: {exc}")
        return False


def test_criterion_01_gauss_identities():
    with Clock(1, "Gaussian identities, n <= 12", 1.0) as c:
        rep = verify_gauss_identities(12)
        c.finish(rep.ok, rep.summary())


def test_criterion_02_alternating_sum_grid():
    with Clock(2, "alternating q-binomial sums, r <= 5", 5.0) as c:
        rep = Report("grid")
        for r in range(1, 6):
            for t in range(1, r + 1):
                for k in range(-r, 2 * r + 1):
                    Q.verify_alternating_sum_lemma(r, t, k, rep)
        c.finish(rep.ok, f"{len(rep.checks)} instances")


def test_criterion_03_two_slot_expansions():
    with Clock(3, "two-slot expansions against rewriting", 30.0) as c:
        rep = Report("two-slot")
        for r in (2, 3, 4):
            for k in range(-r, 7):
                for ell in range(3):
                    Q.verify_two_slot_expansion(r, k, ell, rep)
        c.finish(rep.ok, f"{len(rep.checks)} comparisons")


def test_criterion_04_star_serre():
    with Clock(4, "star Serre sums with L <= 8", MIN) as c:
        rep = Report("star")
        pairs = [(n, r) for n in range(2, 9) for r in range(2, 9) if (n - 1) * (r - 1) + 1 <= 8]
        for n, r in pairs:
            Q.verify_star_serre_vn(n, r, rep=rep)
        assert (4, 2) in pairs
        c.finish(rep.ok, f"{len(pairs)} shapes")


def matrix_grid(L_max: int = 5):
    for r in range(2, L_max + 1):
        for N in range(2, L_max + 1):
            if (N - 1) * (r - 1) + 1 > L_max:
                continue
            for n in (N, N + 1):
                subsets = list(itertools.combinations(range(1, n), N - 1))
                for m in (1, 2):
                    for sets in itertools.product(subsets, repeat=m):
                        yield n, m, N, r, [set(s) for s in sets]


def test_criterion_05_matrix_serre():
    with Clock(5, "matrix Serre sums, m <= 2, L <= 5", 2 * MIN) as c:
        rep = Report("matrix")
        count = 0
        for n, m, N, r, sets in matrix_grid():
            Q.verify_matrix_serre(n, m, N, r, sets, rep=rep)
            count += 1
        c.finish(rep.ok, f"{count} instances")


def test_criterion_06_serre_in_radical():
    with Clock(6, "Serre sums in the radical", MIN) as c:
        ok = True
        names = ("a2", "a3", "b2", "g2", "d4")
        for name in names:
            d = datum(name)
            for i, j in itertools.permutations(range(d.rank), 2):
                ok &= serre_check(d, i, j)
        assert datum("b2").gram == ((4, -2), (-2, 2)) and datum("g2").gram == ((6, -3), (-3, 2))
        c.finish(ok, ", ".join(names))


def test_criterion_07_kostant(frozen):
    with Clock(7, "dimensions equal Kostant counts", 2 * MIN) as c:
        ok = True
        count = 0
        for name in ("a2", "a3"):
            d = datum(name)
            for key, want in frozen["kostant"][name].items():
                nu = tuple(int(x) for x in key.split("_"))
                if sum(nu) > 6:
                    continue
                ws = weight_space(d, nu)
                ok &= ws.certified and ws.dim == want
                count += 1
        c.finish(ok, f"{count} weights")


def canon_suite(d, height: int, jobs: int = 1, order_seed=None, cache_dir=None):
    """Build the table and run every canonical-basis check; returns (table, report)."""
    t = canonical_basis(d, height, jobs=jobs, order_seed=order_seed, cache_dir=cache_dir)
    rep = Report(f"canonical basis suite {list(t.datum.labels)} to height {height}")
    rep.extend(verify_axioms(t))
    rep.extend(verify_star_stability(t))
    for nu in t.weights():
        rep.extend(signed_basis_scan(t, nu))
    rep.extend(verify_crystal_congruences(t))
    rep.extend(verify_commuting_projections(t))
    rr, _ = monomial_reachability(t)
    rep.extend(rr)
    return t, rep


def test_criterion_08_canonical_basis_a2():
    with Clock(8, "A2 canonical basis to height 6", 5 * MIN) as c:
        t, rep = canon_suite(datum("a2"), 6)
        model = all({b.key for b in t[nu]} == a2_monomial_model(t, nu) for nu in t.weights())
        rep.add("equals the monomial model", model)
        c.finish(rep.ok, rep.summary())


def test_criterion_09_fold_a3_c2():
    with Clock(9, "A3 -> C2 fold at p = 2, height 5", 10 * MIN) as c:
        rep, _ = verify_fold(datum("a3"), aut("a3_flip"), 2, 5)
        c.finish(rep.ok, rep.summary())


def test_criterion_10_fold_d4_g2():
    with Clock(10, "D4 -> G2 fold at p = 3, height 4, and the centre star", 30 * MIN) as c:
        rep, _ = verify_fold(datum("d4"), aut("d4_triality"), 3, 4)
        Q.verify_star_identity_uq(datum("d4"), [1], [0, 2, 3], rep=rep)
        c.finish(rep.ok, rep.summary())


def test_criterion_11_common_kernel():
    with Clock(11, "common kernel of the derivations mod p", 5 * MIN) as c:
        ok = True
        count = 0
        for name, p in (("c2", 2), ("g2", 3)):
            t = canonical_basis(datum(name), 5)
            for nu in t.weights():
                if not any(nu):
                    continue
                k = kernel_intersection_rank(lambda w: t.basis(w), nu, p)
                ok &= k == 0
                count += 1
        c.finish(ok, f"{count} weights")


def _reorder(d: CartanDatum, perm):
    labels = [d.labels[i] for i in perm]
    g = [[d.gram[perm[i]][perm[j]] for j in range(d.rank)] for i in range(d.rank)]
    return CartanDatum(labels, g)


def _tree_bytes(root):
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*.json"))}


def test_criterion_12_determinism(tmp_path):
    with Clock(12, "byte-identical caches and reports", 10 * MIN) as c:
        notes = []
        # canonical basis suite on A2
        a2 = datum("a2")
        runs = []
        for k, (perm, seed, jobs) in enumerate([((0, 1), None, 1), ((1, 0), 5, 4), ((1, 0), 9, 1)]):
            cdir = tmp_path / f"canon{k}"
            _, rep = canon_suite(_reorder(a2, perm), 6, jobs=jobs, order_seed=seed, cache_dir=str(cdir))
            runs.append((rep.to_json(), _tree_bytes(cdir)))
        same_canon = all(r == runs[0] for r in runs[1:]) and runs[0][1]
        notes.append(f"canon runs identical: {bool(same_canon)}")
        # fold suite A3 -> C2
        a3 = datum("a3")
        flip = aut("a3_flip")
        runs = []
        for k, (perm, seed, jobs) in enumerate([((0, 1, 2), None, 1), ((2, 0, 1), 3, 4), ((1, 2, 0), 8, 1)]):
            X = _reorder(a3, perm)
            sigma = DiagramAut([perm.index(flip(perm[i])) for i in range(3)])
            cdir = tmp_path / f"fold{k}"
            rep, _ = verify_fold(X, sigma, 2, 5, jobs=jobs, order_seed=seed, cache_dir=str(cdir))
            runs.append((rep.to_json(), _tree_bytes(cdir)))
        same_fold = all(r == runs[0] for r in runs[1:]) and runs[0][1]
        notes.append(f"fold runs identical: {bool(same_fold)}")
        c.finish(bool(same_canon) and bool(same_fold), "; ".join(notes))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
