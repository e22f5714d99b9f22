"""Compare the compiled and pure-Python kernels.

Runs each micro-benchmark against both backends in-process, then times a
whole-disk classification end to end in a subprocess per backend (the backend
is chosen at import, so the end-to-end run needs a fresh interpreter).

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from padyn import _pykernels

try:
    from padyn import _ckernels
except ImportError:
    _ckernels = None

END_TO_END = (
    "from fractions import Fraction; "
    "from padyn.family import CUBIC2; from padyn.tree import explore; "
    "from padyn.ball import PadicBall; from padyn.scalar import PadicScalar; "
    "explore(CUBIC2, PadicBall(PadicScalar(2, 1), Fraction(-5)), 8)"
)


def make_series(rng, n, bits):
    return [rng.getrandbits(bits) * 2 ** rng.randint(0, 8) for _ in range(n)]


def micro(repeat):
    rng = random.Random(1)
    p = 2
    mod = p**160
    xs = make_series(rng, 17, 150)
    ys = make_series(rng, 17, 150)
    cases = {
        "series_mul (17x17, 160 digits)": lambda k: k.series_mul(xs, ys, 16, p, mod),
        "min_val (17 coefficients)": lambda k: k.min_val(xs, p),
        "ival (p=3, small ints)": lambda k: [k.ival(3**j * 7, 3) for j in range(30)],
    }
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'kernel':<34} " + " ".join(f"{name:>12}" for name, _ in backends) + "   speedup")
    for label, fn in cases.items():
        times = []
        for _, mod_ in backends:
            n = 2000
            t = min(timeit.repeat(lambda: fn(mod_), number=n, repeat=repeat)) / n
            times.append(t)
        speed = f"{times[0] / times[1]:8.2f}x" if len(times) == 2 else "     n/a"
        print(f"{label:<34} " + " ".join(f"{t * 1e6:10.2f}us" for t in times) + f"  {speed}")


def end_to_end():
    print("\nexplore(cubic2, D(1, 2^-5), depth 8):")
    base = {k: v for k, v in os.environ.items() if k != "PADYN_PURE_PYTHON"}
    for name, env in (("python", {"PADYN_PURE_PYTHON": "1"}), ("cython", {})):
        full = dict(base, **env)
        code = f"import time; t = time.perf_counter(); {END_TO_END}; print(time.perf_counter() - t)"
        out = subprocess.run([sys.executable, "-c", "import padyn; print(padyn.BACKEND)"],
                             env=full, capture_output=True, text=True).stdout.strip()
        secs = float(subprocess.run([sys.executable, "-c", code], env=full, capture_output=True,
                                    text=True, check=True).stdout.strip())
        print(f"  {name:<7} (loaded backend: {out}) {secs:.3f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; only the pure-Python backend is timed")
    micro(args.repeat)
    if not args.skip_end_to_end:
        end_to_end()


if __name__ == "__main__":
    main()
