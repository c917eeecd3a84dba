"""Compare the compiled and pure-Python kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  Prints the median time of
each kernel per backend and the speed-up, then one end-to-end timing
(canonical basis of A3 up to height 6) under each backend in a subprocess.
"""

import os
import random
import statistics
import subprocess
import sys
import time

from qfold.kernels import backends


def _poly(rng, deg, p=0):
    coeffs = [rng.randint(-50, 50) for _ in range(deg + 1)]
    coeffs[0] = coeffs[0] or 1
    coeffs[-1] = coeffs[-1] or 1
    return rng.randint(-deg, 0), tuple(coeffs)


def _time(fn, repeat=5):
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs)


def micro():
    rng = random.Random(1)
    polys = [_poly(rng, rng.randint(2, 30)) for _ in range(400)]
    mod = (1 << 61) - 1
    rows = [[rng.randrange(mod) for _ in range(120)] for _ in range(120)]
    results = {}
    for name, mod_ in sorted(backends().items()):
        def mul():
            for (va, ca), (vb, cb) in zip(polys, polys[1:]):
                mod_.lp_mul(va, ca, vb, cb, 0)

        def add():
            for (va, ca), (vb, cb) in zip(polys, polys[1:]):
                mod_.lp_add(va, ca, vb, cb, 0)

        def ech():
            mod_.echelon_mod([list(r) for r in rows], mod, 120)

        results[name] = {"lp_mul": _time(mul), "lp_add": _time(add), "echelon_mod": _time(ech)}
    return results


def end_to_end():
    code = ("import time;from qfold.cartan import load_datum;from qfold.canon import canonical_basis;"
            "import qfold, os;d=load_datum(os.path.join(os.path.dirname(qfold.__file__),'data','a3.json'));"
            "t=time.perf_counter();canonical_basis(d,6);print(time.perf_counter()-t)")
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, QFOLD_PURE_PYTHON=flag)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                             check=True)
        out["python" if flag == "1" else "default"] = float(res.stdout.strip())
    return out


def main():
    res = micro()
    print(f"{'kernel':<14}" + "".join(f"{b:>12}" for b in sorted(res)) + "     speed-up")
    for k in ("lp_add", "lp_mul", "echelon_mod"):
        row = [res[b][k] for b in sorted(res)]
        ratio = res["python"][k] / res["cython"][k] if "cython" in res else float("nan")
        print(f"{k:<14}" + "".join(f"{x * 1e3:>10.2f}ms" for x in row) + f"{ratio:>12.1f}x")
    e2e = end_to_end()
    print(f"A3 canonical basis to height 6: default backend {e2e['default']:.2f}s, "
          f"pure Python {e2e['python']:.2f}s")


if __name__ == "__main__":
    main()
