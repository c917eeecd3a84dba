"""Command-line entry point ``qfold``.

Exit codes: 0 when every check passes, 1 when a verification fails, 2 for
bad input (unreadable datum, malformed automorphism, non-prime p, ...).
Reports are JSON with sorted keys, so identical runs give identical bytes.
"""

import argparse
import json
import os
import sys

from . import cache
from .cartan import (factor_automorphism, fold, is_admissible, is_prime_power,
                     load_datum, parse_aut, unfold)
from .qarith import is_prime
from .report import Report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
HEIGHT_CAP = 12


class InputError(ValueError):
    pass


# ---- argument helpers ------------------------------------------------------
def _datum(args):
    if not args.datum:
        raise InputError("--datum is required")
    try:
        d = load_datum(args.datum)
    except (OSError, ValueError, KeyError) as err:
        raise InputError(f"cannot read datum {args.datum}: {err}")
    ok, diags = d.validate()
    if not ok and (args.cmd, args.action) != ("cartan", "validate"):
        raise InputError("invalid Cartan datum: " + "; ".join(diags))
    return d


def _aut(args, datum):
    if not args.aut:
        raise InputError("--aut is required")
    text = args.aut
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        aut = parse_aut(text, datum)
    except (ValueError, KeyError, TypeError) as err:
        raise InputError(f"bad automorphism: {err}")
    if len(aut) != datum.rank or not aut.preserves(datum):
        raise InputError("automorphism does not preserve the datum")
    if not is_admissible(datum, aut):
        raise InputError("automorphism is not admissible")
    return aut


def _prime(args):
    if args.p is None:
        raise InputError("--p is required")
    if not is_prime(args.p):
        raise InputError(f"{args.p} is not prime")
    return args.p


def _height(args):
    h = args.max_height
    if not 0 <= h <= HEIGHT_CAP:
        raise InputError(f"--max-height must lie in [0, {HEIGHT_CAP}]")
    return h


def _weight(args, datum):
    if not args.weight:
        raise InputError("--weight is required")
    try:
        w = tuple(int(x) for x in args.weight.split(","))
    except ValueError:
        raise InputError(f"bad weight {args.weight!r}")
    if len(w) != datum.rank or min(w) < 0:
        raise InputError("weight must list one nonnegative entry per node")
    return w


def _params(text) -> dict:
    out = {}
    if not text:
        return out
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise InputError(f"bad parameter {part!r}; expected key=value")
        k, v = part.split("=", 1)
        v = v.strip()
        try:
            out[k.strip()] = int(v)
        except ValueError:
            out[k.strip()] = v
    return out


def _cache_dir(args):
    return args.cache_dir or cache.default_dir()


def _canon_table(datum, args, height):
    from .canon import canonical_basis
    return canonical_basis(datum.canonical(), height, jobs=args.jobs, cache_dir=_cache_dir(args))


def _ws_in_canonical(datum, w):
    X = datum.canonical()
    out = [0] * X.rank
    for i, c in enumerate(w):
        out[X.index(datum.labels[i])] = c
    return X, tuple(out)


# ---- commands ----------------------------------------------------------------
def cmd_cartan(args):
    datum = _datum(args)
    if args.action == "validate":
        ok, diags = datum.validate()
        rep = Report("Cartan datum")
        rep.add("datum axioms", ok, diagnostics=diags, rank=datum.rank)
        return rep, None
    if args.action == "fold":
        aut = _aut(args, datum)
        folded, orbits = fold(datum, aut)
        payload = folded.to_dict()
        payload["orbits"] = [[datum.labels[i] for i in o] for o in orbits]
        return None, payload
    if args.action == "unfold":
        ok, diags = datum.validate()
        if not ok:
            raise InputError("invalid Cartan datum: " + "; ".join(diags))
        big, aut = unfold(datum)
        back, _ = fold(big, aut)
        from .cartan import isomorphic
        rep = Report("unfolding")
        rep.add("unfolded datum is symmetric", big.is_symmetric_type())
        rep.add("refolding recovers the datum", isomorphic(back, datum) is not None)
        payload = {"datum": big.to_dict(), "perm": list(aut.perm), "report": rep.as_dict()}
        return rep, payload
    if args.action == "factor":
        aut = _aut(args, datum)
        chain = factor_automorphism(datum, aut)
        v = chain.verify()
        rep = Report("automorphism factorization")
        rep.add("chain of prime-power stages", v["ok"], **{k: x for k, x in v.items() if k != "ok"})
        payload = chain.to_dict()
        payload["report"] = rep.as_dict()
        return rep, payload
    raise InputError(f"unknown action {args.action}")


def cmd_uq(args):
    from .uqminus import serre_check, weight_space
    datum = _datum(args)
    if args.action == "dim":
        w = _weight(args, datum)
        ws = weight_space(datum, w, height_cap=max(8, sum(w)), cache_dir=_cache_dir(args))
        rep = Report("weight space dimension")
        rep.add("dimension certified", ws.certified, weight=list(w), dim=ws.dim,
                words=len(ws.words), radical_rank=ws.radical_rank)
        try:
            from .roots import kostant_count
            k = kostant_count(datum, w)
            rep.add("dimension equals Kostant count", k == ws.dim, kostant=k)
        except ValueError:
            pass
        return rep, None
    if args.action == "serre":
        rep = Report("quantum Serre relations")
        for i in range(datum.rank):
            for j in range(datum.rank):
                if i != j:
                    rep.add("Serre element lies in the radical", serre_check(datum, i, j),
                            i=datum.labels[i], j=datum.labels[j])
        return rep, None
    if args.action == "gram":
        w = _weight(args, datum)
        ws = weight_space(datum, w, height_cap=max(8, sum(w)), cache_dir=_cache_dir(args))
        payload = ws.to_dict()
        return None, payload
    if args.action == "kernel":
        from .uqminus import kernel_intersection_rank
        h = _height(args)
        p = args.p or 0
        if p and not is_prime(p):
            raise InputError(f"{p} is not prime")
        table = _canon_table(datum, args, h)
        rep = Report("common kernel of the derivations")
        ws = [_weight(args, datum)] if args.weight else None
        targets = [_ws_in_canonical(datum, w)[1] for w in ws] if ws else \
            [w for w in table.weights() if any(w)]
        for w in targets:
            rk = kernel_intersection_rank(lambda nu: [b.elem for b in table[nu]], w, p)
            rep.add("common kernel is zero", rk == 0, weight=list(w), p=p, kernel_dim=rk)
        return rep, None
    raise InputError(f"unknown action {args.action}")


def cmd_canon(args):
    from .canon import (crystal_graph, monomial_reachability, signed_basis_scan,
                        verify_axioms, verify_commuting_projections,
                        verify_crystal_congruences, verify_star_stability)
    datum = _datum(args)
    h = _height(args)
    table = _canon_table(datum, args, h)
    if args.action == "compute":
        rep = verify_axioms(table)
        payload = None
        if args.out_basis:
            payload = {"datum": table.datum.to_dict(), "height": h,
                       "weights": [table.to_dict(nu) for nu in table.weights()]}
        return rep, payload
    if args.action == "verify":
        rep = Report("canonical basis suite")
        rep.extend(verify_axioms(table))
        rep.extend(verify_star_stability(table))
        rep.extend(verify_crystal_congruences(table))
        rrep, _ = monomial_reachability(table)
        rep.extend(rrep)
        rep.extend(verify_commuting_projections(table))
        _, grep = crystal_graph(table)
        rep.extend(grep)
        return rep, None
    if args.action == "scan":
        w = _weight(args, datum)
        _, cw = _ws_in_canonical(datum, w)
        if sum(cw) > h:
            raise InputError("weight is above --max-height")
        return signed_basis_scan(table, cw, degree=args.degree, coeff_bound=args.coeff_bound), None
    if args.action == "graph":
        graph, rep = crystal_graph(table)
        if args.dot:
            return rep, graph.to_dot()
        return rep, {"nodes": {"_".join(map(str, k)): v for k, v in sorted(graph.nodes.items())},
                     "edges": [[list(a), b, graph.labels[c], list(d), e]
                               for a, b, c, d, e in graph.edges]}
    raise InputError(f"unknown action {args.action}")


def cmd_fold(args):
    from .foldmodp import verify_fold
    datum = _datum(args)
    aut = _aut(args, datum)
    p = _prime(args)
    h = _height(args)
    order = aut.order
    if args.action == "verify":
        if order == 1 or (is_prime_power(order) and order % p == 0):
            rep, _ = verify_fold(datum, aut, p, h, jobs=args.jobs, cache_dir=_cache_dir(args))
            return rep, None
        if is_prime_power(order):
            raise InputError(f"order {order} of the automorphism is not a power of {p}")
        chain = factor_automorphism(datum, aut)
        rep = Report("folding chain")
        v = chain.verify()
        rep.add("chain of prime-power stages", v["ok"])
        for k, st in enumerate(chain.stages):
            q = min(x for x in range(2, st.aut.order + 1) if st.aut.order % x == 0)
            srep, _ = verify_fold(st.datum, st.aut, q, h, jobs=args.jobs,
                                  cache_dir=_cache_dir(args))
            for c in srep.checks:
                c.detail = dict(c.detail, stage=k, p=q)
            rep.extend(srep)
        from .foldmodp import chain_xi
        crep, _ = chain_xi(datum, aut, h, jobs=args.jobs)
        rep.extend(crep)
        return rep, None
    if args.action == "xi":
        from .foldmodp import FoldContext
        if order > 1 and not (is_prime_power(order) and order % p == 0):
            raise InputError(f"order {order} of the automorphism is not a power of {p}")
        ctx = FoldContext(datum, aut, p, h, jobs=args.jobs, cache_dir=_cache_dir(args))
        rep, maps = ctx.verify_xi()
        fl = ctx.ftable.datum.labels
        payload = {"datum": ctx.X.to_dict(), "folded": ctx.ftable.datum.to_dict(), "p": p,
                   "xi": [{"weight": list(nu), "folded_weight": dict(zip(fl, ctx.fold_w(nu))),
                           "map": [[k, fk, s] for k, (fk, s) in sorted(m.items())]}
                          for nu, m in sorted(maps.items())],
                   "report": rep.as_dict()}
        return rep, payload
    raise InputError(f"unknown action {args.action}")


FAMILIES = ("expansion", "alternating-sum", "multi-slot", "star-serre", "matrix-serre",
            "factorization", "strategy", "star-uq")


def cmd_idents(args):
    from . import qidents as Q
    prm = _params(args.params)
    fam = args.family
    allow = bool(prm.pop("allow_large", 0))

    def need(*keys, **defaults):
        out = []
        for k in keys:
            if k in prm:
                out.append(prm[k])
            elif k in defaults:
                out.append(defaults[k])
            else:
                raise InputError(f"family {fam} needs parameter {k}")
        return out

    try:
        if fam == "expansion":
            r, k, ell = need("r", "k", "l", k=0, l=0)
            return Q.verify_two_slot_expansion(r, k, ell), None
        if fam == "alternating-sum":
            r, t, k = need("r", "t", "k")
            return Q.verify_alternating_sum_lemma(r, t, k), None
        if fam == "multi-slot":
            n, r, k, ell = need("n", "r", "k", "l", l=0)
            return Q.verify_multi_slot_coefficients(n, r, k, ell), None
        if fam == "star-serre":
            n, r = need("n", "r")
            return Q.verify_star_serre_vn(n, r, allow_large=allow), None
        if fam == "matrix-serre":
            n, m, N, r = need("n", "m", "N", "r")
            sets = _sets(prm.get("A"), n, m, N)
            return Q.verify_matrix_serre(n, m, N, r, sets, allow_large=allow), None
        if fam == "factorization":
            N, r = need("N", "r")
            return Q.verify_coefficient_factorization(N, r), None
        if fam == "strategy":
            n, r, samples = need("n", "r", "samples", samples=500)
            return Q.verify_strategy_independence(n, r, samples), None
        if fam == "star-uq":
            datum = _datum(args)
            eta = _labels(prm.get("eta"), datum)
            eta2 = _labels(prm.get("eta2"), datum)
            aut = _aut(args, datum) if args.aut else None
            p = _prime(args) if aut is not None else None
            return Q.verify_star_identity_uq(datum, eta, eta2, aut=aut, p=p), None
    except (ValueError, ArithmeticError) as err:
        # BudgetError is a ValueError; malformed parameters land here too
        raise InputError(str(err))
    raise InputError(f"unknown family {fam}; choose from {', '.join(FAMILIES)}")


def _labels(text, datum):
    if text is None:
        raise InputError("star-uq needs eta and eta2 (labels joined by '+')")
    try:
        return [datum.index(x) for x in str(text).split("+")]
    except (KeyError, ValueError):
        raise InputError(f"unknown labels in {text!r}")


def _sets(text, n, m, N):
    """``A=1.2+2.3``: row sets joined by '+', columns joined by '.'."""
    if text is None:
        return [frozenset(range(1, N))] * m
    rows = str(text).split("+")
    try:
        return [frozenset(int(c) for c in row.split(".") if c) for row in rows]
    except ValueError:
        raise InputError(f"bad interaction sets {text!r}")


COMMANDS = {"cartan": cmd_cartan, "uq": cmd_uq, "canon": cmd_canon, "fold": cmd_fold,
            "idents": cmd_idents}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--datum", help="Cartan datum JSON file")
    common.add_argument("--aut", help='target labels "3,2,1", JSON {"perm": [...]} or a file')
    common.add_argument("--p", type=int, help="prime")
    common.add_argument("--max-height", type=int, default=6)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--weight", help='comma list, e.g. "2,1"')
    common.add_argument("--out", help="write the JSON result here instead of stdout")
    common.add_argument("--cache-dir", help=f"overrides ${cache.ENV_VAR}")

    parser = argparse.ArgumentParser(prog="qfold", description="Folding and canonical bases")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def group(name, actions):
        g = sub.add_parser(name)
        gs = g.add_subparsers(dest="action", required=True)
        return {a: gs.add_parser(a, parents=[common]) for a in actions}

    group("cartan", ["validate", "fold", "unfold", "factor"])
    group("uq", ["dim", "serre", "gram", "kernel"])
    cn = group("canon", ["compute", "verify", "scan", "graph"])
    cn["compute"].add_argument("--out-basis", action="store_true",
                               help="include the basis itself in the output")
    cn["scan"].add_argument("--degree", type=int, default=1)
    cn["scan"].add_argument("--coeff-bound", type=int, default=1)
    cn["graph"].add_argument("--dot", action="store_true")
    group("fold", ["verify", "xi"])
    idn = group("idents", ["verify"])
    idn["verify"].add_argument("--family", required=True, choices=FAMILIES)
    idn["verify"].add_argument("--params", default="", help='e.g. "r=2,n=4"')
    return parser


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_INPUT if err.code else EXIT_OK
    if args.jobs < 1:
        print("qfold: --jobs must be positive", file=sys.stderr)
        return EXIT_INPUT
    for attr in ("out_basis", "dot"):
        if not hasattr(args, attr):
            setattr(args, attr, False)
    try:
        rep, payload = COMMANDS[args.cmd](args)
    except InputError as err:
        print(f"qfold: {err}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(payload, str):
        _emit(args, payload)
    else:
        doc = payload if payload is not None else rep.as_dict()
        _emit(args, json.dumps(doc, sort_keys=True, indent=1) + "\n")
    if rep is not None:
        print(rep.summary(), file=sys.stderr)
        for c in rep.failures():
            print(f"FAILED {c.name}: {json.dumps(c.detail, sort_keys=True)}", file=sys.stderr)
        if not rep.ok:
            return EXIT_FAIL
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
