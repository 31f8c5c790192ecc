"""Time the derivation-search kernels against each other.

Both backends walk the same breadth-first frontier, so the explored
counts must match call for call; the only thing allowed to differ is
wall time. The workload is the shipped pumping fixture's reachability
family (the grammar grows with n, the target word with 2n+1) plus a
batch of random noncontracting systems.

Run from the repository root:

    python3 benchmarks/bench_membership.py
    python3 benchmarks/bench_membership.py --family-max 6 --repeat 5
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from upstack._kernel import membership_py
from upstack.core import Configuration
from upstack.fixtures import fixture_text
from upstack.grammar import _intern, build_post_grammar, encode_config, single_origin
from upstack.model import parse_model

try:
    from upstack._kernel import membership_cy
except ImportError:
    membership_cy = None


def family_workload(family_max: int):
    model = parse_model(fixture_text("e1.upds"))
    grammar = build_post_grammar(single_origin(model.spec, model.config_set("C1")))
    packed, pack, _ = _intern(grammar)
    start = pack((grammar.start,))
    cases = []
    for n in range(family_max + 1):
        probe = Configuration("p2", ("a",) * (n + 1) + ("b",) * n, ("bot",))
        cases.append((f"family n={n}", packed, start, pack(encode_config(probe))))
    return cases


def random_workload(count: int, seed: int):
    rng = random.Random(seed)
    cases = []
    for i in range(count):
        nsym = rng.randint(2, 5)

        def word(length):
            out = bytearray()
            for _ in range(length):
                out += rng.randrange(nsym).to_bytes(2, "little")
            return bytes(out)

        prods = []
        for _ in range(rng.randint(2, 8)):
            llen = rng.randint(1, 2)
            prods.append((word(llen), word(rng.randint(llen, llen + 2))))
        cases.append((f"random {i}", prods, word(1), word(rng.randint(4, 7))))
    return cases


def run_case(kernel, prods, start, target, repeat, budget):
    times = []
    result = None
    for _ in range(repeat):
        began = time.perf_counter()
        result = kernel.search_derivation(prods, start, target, budget)
        times.append(time.perf_counter() - began)
    return min(times), result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--family-max", type=int, default=5)
    parser.add_argument("--random-count", type=int, default=30)
    parser.add_argument("--seed", type=int, default=97)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--budget", type=int, default=10_000_000)
    args = parser.parse_args()

    if membership_cy is None:
        print("compiled kernel unavailable; timing the pure backend alone")
    cases = family_workload(args.family_max) + random_workload(
        args.random_count, args.seed
    )
    header = f"{'case':>14} {'explored':>9} {'pure (ms)':>10}"
    if membership_cy is not None:
        header += f" {'compiled (ms)':>14} {'speedup':>8}"
    print(header)
    ratios = []
    for name, prods, start, target in cases:
        pure_time, pure_result = run_case(
            membership_py, prods, start, target, args.repeat, args.budget
        )
        line = f"{name:>14} {pure_result[1]:>9} {pure_time * 1e3:>10.2f}"
        if membership_cy is not None:
            fast_time, fast_result = run_case(
                membership_cy, prods, start, target, args.repeat, args.budget
            )
            if fast_result != pure_result:
                raise SystemExit(
                    f"backends disagree on {name}: {pure_result} vs {fast_result}"
                )
            ratio = pure_time / fast_time if fast_time else float("inf")
            if pure_result[1] >= 100:
                ratios.append(ratio)
            line += f" {fast_time * 1e3:>14.2f} {ratio:>7.1f}x"
        print(line)
    if ratios:
        print(
            f"\nmedian speedup {statistics.median(ratios):.1f}x over "
            f"{len(ratios)} cases exploring >= 100 forms "
            f"(min {min(ratios):.1f}x, max {max(ratios):.1f}x)"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
