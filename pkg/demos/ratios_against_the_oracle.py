"""Empirical approximation ratios of every adapter family on small random instances."""

import sys
from collections import defaultdict
from fractions import Fraction

from greedycover import generators as gen
from greedycover.formats import load_instance
from greedycover.oracle import approximation_ratio, exact_opt
from greedycover.product import revised_solve
from greedycover.solver import solve

FAMILIES = [
    ("contra-polymatroid", lambda s: gen.polymatroid_cardinality(1 + s % 5, s)),
    ("knapsack", lambda s: gen.knapsack(1 + s % 5, s)),
    ("knapsack, up to 3 copies", lambda s: gen.knapsack(1 + s % 4, s, "multi")),
    ("subset cover", lambda s: gen.subsetcover(1 + s % 5, s)),
    ("flow cover, one line", lambda s: gen.flowcover(1 + s % 5, s)),
    ("flow cover, two lines", lambda s: gen.flowcover(3 + s % 2, s, lines=2)),
    ("precedence knapsack", lambda s: gen.precknap(1 + s % 5, s)),
    ("multicut on a tree", lambda s: gen.multicut(1 + s % 5, s)),
]


def main(count: int = 30):
    for name, make in FAMILIES:
        ratios = defaultdict(int)
        for seed in range(count):
            loaded = load_instance(make(seed))
            run = revised_solve(loaded.system) if loaded.is_product else solve(loaded.system)
            ratios[approximation_ratio(run, exact_opt(loaded.system))] += 1
        worst = max(ratios)
        optimal = ratios.get(Fraction(1), 0)
        print(f"{name:28} optimal on {optimal}/{count}, worst ratio {worst}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 30)
