import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfold import kernels
from qfold.kernels import backends

BACKENDS = backends()
needs_c = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")

dense = st.tuples(st.integers(-5, 5), st.lists(st.integers(-20, 20), max_size=8))


def _norm(mod, v, c):
    return mod.trim(v, tuple(c))


@needs_c
@given(dense, dense, st.sampled_from([0, 2, 3, 7]))
def test_laurent_kernels_agree(a, b, p):
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    va, ca = _norm(py, *a)
    vb, cb = _norm(py, *b)
    if p:
        ca = tuple(x % p for x in ca)
        cb = tuple(x % p for x in cb)
        va, ca = py.trim(va, ca)
        vb, cb = py.trim(vb, cb)
    assert py.lp_add(va, ca, vb, cb, p) == cy.lp_add(va, ca, vb, cb, p)
    assert py.lp_mul(va, ca, vb, cb, p) == cy.lp_mul(va, ca, vb, cb, p)
    assert py.lp_axpy(va, ca, 3, 2, vb, cb, p) == cy.lp_axpy(va, ca, 3, 2, vb, cb, p)


@needs_c
@settings(max_examples=50)
@given(st.lists(st.lists(st.integers(0, 12), min_size=5, max_size=5), max_size=7),
       st.sampled_from([2, 5, 13, (1 << 61) - 1]), st.integers(-1, 4))
def test_echelon_agrees(rows, modulus, limit):
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    a = py.echelon_mod([list(r) for r in rows], modulus, 5, limit)
    b = cy.echelon_mod([list(r) for r in rows], modulus, 5, limit)
    assert a == b


def test_backend_selected():
    assert kernels.BACKEND in ("python", "cython")


def test_pure_python_switch():
    code = "from qfold import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, QFOLD_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_pure_python_results_match():
    code = ("from qfold.cartan import CartanDatum;from qfold.canon import canonical_basis;"
            "t=canonical_basis(CartanDatum(['1','2'],[[2,-1],[-1,2]]),4);"
            "print('|'.join(b.key for nu in t.weights() for b in t[nu]))")
    res = []
    for flag in ("0", "1"):
        env = dict(os.environ, QFOLD_PURE_PYTHON=flag)
        res.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                  text=True, check=True).stdout)
    assert res[0] == res[1]
