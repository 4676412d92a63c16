"""Two welfare rules, one instance, two very different allocations.

Walks through the motivating chain instance: n agents, n goods, agent 1
wanting only the first good and every later agent torn between "their" good
and the previous one.  The Nash rule (log) is forced to give everyone
positive utility; the harmonic rule happily trades one agent's crumbs for a
much larger total.
"""

from welfarist.constructions import (
    chain_instance,
    chain_positive_allocation,
    chain_shifted_allocation,
)
from welfarist.fairness import is_ef1, is_pareto_optimal
from welfarist.functions import parse_welfare
from welfarist.model import serialize_instance
from welfarist.solver import enumerate_maximizers
from welfarist.values import render_value

n = 4
inst = chain_instance(n)
print("instance:", serialize_instance(inst))

for spec in ("log", "harmonic:0"):
    fn = parse_welfare(spec)
    maxima = enumerate_maximizers(inst, fn)
    print(f"\nrule f = {spec}")
    print("  welfare:", render_value(maxima.welfare))
    for alloc in maxima.allocations:
        total = sum(inst.bundle_utility(i, alloc.bundle_of(i)) for i in range(n))
        print(
            f"  maximizer {alloc.bundles(n)}  utilitarian total = {total}",
            f"EF1 = {is_ef1(inst, alloc).holds}",
            f"PO = {is_pareto_optimal(inst, alloc).verdict}",
        )

diag = chain_positive_allocation(n)
shift = chain_shifted_allocation(n)
print("\nthe log rule must pick", diag.bundles(n), "- the only allocation with")
print("positive utility everywhere - while the harmonic rule picks", shift.bundles(n))
print("whose total is", n * n - 2 * n + 3, "instead of", 2 * n - 1)
