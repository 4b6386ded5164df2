"""Benchmark the pure-Python kernel lane against the compiled one.

Runs the three kernels on representative workloads and prints a table:

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import itertools
import time

from ramseykit.fixtures import chain
from ramseykit.formulas import compile_formula
from ramseykit.kernels import lanes
from ramseykit.kernels.encode import (
    build_match_plan,
    build_tables,
    flatten_members,
    flatten_tuples,
)
from ramseykit.iso import enumerate_copies
from ramseykit.qftypes import isolating_formula, qf_type
from ramseykit.trees import build_tree, tree_structure


def bench_embeddings():
    pattern = tree_structure([(), (0,), (1,), (0, 0), (1, 0)], "L0").structure
    host = build_tree(3, 3, "L0").structure
    plan = build_match_plan(pattern, host)
    return lambda lane: lane.match_embeddings(plan)


def bench_arrow():
    c, b, a = chain(7), chain(3), chain(2)
    a_copies = enumerate_copies(c, a)
    b_copies = enumerate_copies(c, b)
    index_of = {cp.element_set: i for i, cp in enumerate(a_copies)}
    members = [tuple(sorted(index_of[cp.element_set] for cp in a_copies
                            if cp.element_set <= bc.element_set))
               for bc in b_copies]
    starts, items = flatten_members(members)
    m = len(a_copies)
    return lambda lane: lane.arrow_search(2, m, starts, items, 10**9)


def bench_formula():
    host = build_tree(2, 2, "Ls").structure
    tabs = build_tables(host)
    theta = isolating_formula(qf_type(host, (1, 2, 4)))
    program, _ = compile_formula(theta, host, tabs)
    tuples = list(itertools.product(range(host.size), repeat=3))
    flat = flatten_tuples(tuples, 3)
    count = len(tuples)
    return lambda lane: lane.eval_formula_batch(program, tabs, flat, count)


BENCHES = {
    "embeddings (5-node pattern into 3^<=3)": (bench_embeddings, 20),
    "arrow search (7-chain -> (3)^2_2)": (bench_arrow, 20),
    "formula batch (343 triples x diagram)": (bench_formula, 200),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    available = lanes()
    print(f"lanes: {', '.join(available)}")
    width = max(len(k) for k in BENCHES)
    header = f"{'benchmark':<{width}}  " + "".join(f"{name:>12}" for name in available)
    if len(available) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for name, (setup, iters) in BENCHES.items():
        run = setup()
        times = {}
        for lane_name, lane in available.items():
            best = min(
                _time(run, lane, iters) for _ in range(args.repeat)
            )
            times[lane_name] = best / iters
        row = f"{name:<{width}}  " + "".join(f"{times[l] * 1e3:>10.3f}ms" for l in available)
        if "pure" in times and "native" in times:
            row += f"{times['pure'] / times['native']:>9.1f}x"
        print(row)


def _time(run, lane, iters):
    t0 = time.perf_counter()
    for _ in range(iters):
        run(lane)
    return time.perf_counter() - t0


if __name__ == "__main__":
    main()
