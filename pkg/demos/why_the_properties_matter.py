"""Run the greedy solver on well-behaved and broken systems.

A contra-polymatroid is solved exactly.  Two small systems that each drop
one structural property still run to completion, but their output is
infeasible, and the validator names the missing property.
"""

from greedycover import generators as gen
from greedycover.formats import load_instance
from greedycover.oracle import exact_opt
from greedycover.solver import check_feasibility, solve
from greedycover.system import validate_greedy_properties


def show(title, doc):
    system = load_instance(doc).system
    run = solve(system, certificate=False)
    ok, row = check_feasibility(system, run.x)
    report = validate_greedy_properties(system)
    broken = sorted({v.tag for v in report.violations}) or ["none"]
    print(f"{title}: x={run.x} cost={run.primal_cost} dual={run.dual_value}")
    print(f"  feasible={ok}" + ("" if ok else f" (row {system.element_label(row)} violated)"))
    print(f"  missing properties: {', '.join(broken)}")
    if ok:
        print(f"  oracle optimum: {exact_opt(system).opt_value}")


if __name__ == "__main__":
    show("convex cardinality rank", gen.polymatroid_cardinality(4, seed=2))
    show("decreasing column", gen.p2_counterexample())
    show("non-supermodular rank", gen.p4_counterexample())
