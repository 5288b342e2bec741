"""Compare the compiled kernel against the numpy reference backend.

Times eval_terms_batch on representative workloads (batched coefficient
rows against systems of growing size, all norm regimes) and prints rows
per workload plus the speedup.  Run as:

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import math
import time

import numpy as np

from bibasis.kernels import _ref

try:
    from bibasis.kernels import _fast
except ImportError:
    _fast = None

WORKLOADS = (
    # (m, dim, batch, p)
    (8, 8, 4096, 2.0),
    (16, 64, 2048, 2.0),
    (16, 64, 2048, 1.0),
    (16, 64, 2048, math.inf),
    (32, 256, 512, 3.0),
    (64, 256, 256, 2.0),
)


def _time(impl, X, w, p, A, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.eval_terms_batch(X, w, p, A)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'m':>4} {'dim':>5} {'batch':>6} {'p':>5} "
          f"{'ref evals/s':>12} {'fast evals/s':>13} {'speedup':>8}")
    for m, dim, batch, p in WORKLOADS:
        X = rng.standard_normal((m, dim))
        w = rng.random(dim) + 0.1
        A = rng.standard_normal((batch, m))
        t_ref = _time(_ref, X, w, p, A, args.repeats)
        row = f"{m:>4} {dim:>5} {batch:>6} {p:>5g} {batch / t_ref:>12.0f}"
        if _fast is None:
            print(row + f" {'n/a':>13} {'n/a':>8}")
            continue
        t_fast = _time(_fast, X, w, p, A, args.repeats)
        if not np.allclose(
            _ref.eval_terms_batch(X, w, p, A),
            _fast.eval_terms_batch(X, w, p, A),
            rtol=1e-12,
        ):
            raise AssertionError("backends disagree; benchmark aborted")
        print(row + f" {batch / t_fast:>13.0f} {t_ref / t_fast:>7.2f}x")
    if _fast is None:
        print("compiled backend unavailable; showing reference only")


if __name__ == "__main__":
    main()
