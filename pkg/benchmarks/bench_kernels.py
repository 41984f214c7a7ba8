"""Time the pure-Python and compiled kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 5] [--seed 1]

Prints one line per (kernel, workload) with the best time of each backend
and the speed-up. Without the compiled extension only the pure column runs.
"""

import argparse
import random
import timeit

from cwf import kernels
from cwf.decompose import build_partition
from cwf.generators import gen_3ring, gen_preset, gen_random, random_profile
from cwf.graph import pattern


def workloads(seed):
    """In-class instances make the 4K1/C4/P6 searches exhaustive; hev_scan is 2^n."""
    rng = random.Random(seed)
    out = []
    hosts = [(f"instance n={g.n}", g) for g in
             (gen_preset("sparse", seed).graph, gen_preset("x4-split", seed).graph)]
    hosts.append(("random n=60 p=0.5", gen_random(60, 0.5, rng.random())))
    for label, g in hosts:
        for pat in ("4K1", "C4", "P6", "C6"):
            adj = pattern(pat).adjacency()
            out.append(("match_pattern", f"{pat} in {label}",
                        lambda b, g=g, adj=adj: b.match_pattern(list(g.rows), g.n, adj)))
    small = next(g for s in range(seed, seed + 500)
                 for g in [gen_preset("x2-x6", s).graph] if g.n <= 15)
    masks = list(build_partition(small).partition.masks)
    out.append(("hev_scan", f"26 parts, n={small.n}",
                lambda b: b.hev_scan(list(small.rows), small.n, masks)))
    ring = gen_3ring(5, [random_profile(5, rng) for _ in range(3)])
    rmasks = list(ring.partition.masks)
    out.append(("hev_scan", "3-ring n=15",
                lambda b: b.hev_scan(list(ring.graph.rows), ring.graph.n, rmasks)))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    backends = kernels.backends()
    names = [b.BACKEND for b in backends]
    print(f"{'kernel':14} {'workload':26} " + " ".join(f"{n:>10}" for n in names) + "  speed-up")
    for kernel, label, call in workloads(args.seed):
        best = []
        for b in backends:
            t = timeit.Timer(lambda: call(b))
            loops, _ = t.autorange()
            best.append(min(t.repeat(args.repeat, loops)) / loops)
        ratio = f"{best[0] / best[-1]:8.1f}x" if len(best) > 1 else ""
        print(f"{kernel:14} {label:26} " + " ".join(f"{s * 1e3:8.3f}ms" for s in best) + "  "
              + ratio)


if __name__ == "__main__":
    main()
