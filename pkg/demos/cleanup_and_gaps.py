"""Product systems: why the cleanup pass exists and where the bounds are tight."""

from greedycover import generators as gen
from greedycover.formats import load_instance
from greedycover.oracle import exact_opt
from greedycover.product import revised_solve, witness_cover_diagnostics
from greedycover.solver import solve

star = load_instance(gen.starcleanup(4)).system
raw = revised_solve(star, cleanup=False)
clean = revised_solve(star)
print(f"star, 4 leaves: cost {raw.primal_cost} before cleanup, {clean.primal_cost} after, optimum {exact_opt(star).opt_value}")
print(f"  x before {raw.x}, after {clean.x}")

for k in range(2, 7):
    ps = load_instance(gen.kgap(k)).system
    run = revised_solve(ps)
    report = witness_cover_diagnostics(ps, run)
    print(f"k-gap k={k}: cost {run.primal_cost} vs dual {run.dual_value}, witness cover ratio {report.k_observed}")

for n in (3, 4, 5):
    run = solve(load_instance(gen.baddual(n - 1, n)).system)
    print(f"bad dual n={n}: cost/dual = {run.primal_cost / run.dual_value}")
