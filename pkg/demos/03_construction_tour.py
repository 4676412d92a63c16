"""Tour of the structured instance families and what each one forces.

Every generator here pins down one behavior: a tie that drags a non-EF1
allocation into the argmax set, a balanced split that is the only EF1
allocation, or a separation between two rules.
"""

from fractions import Fraction

from welfarist.constructions import (
    GENERATORS,
    even_split_instance,
    flat_table_function,
    flat_tie_gadget,
    offset_good_instance,
    uniform_goods_instance,
)
from welfarist.fairness import is_ef1
from welfarist.functions import parse_welfare
from welfarist.model import classify, serialize_instance
from welfarist.solver import enumerate_maximizers, welfare_of
from welfarist.values import compare

print("available generators:", ", ".join(sorted(GENERATORS)), "+ flat-tie\n")

print("uniform goods (two agents, one good each worth 6 vs 1):")
inst = uniform_goods_instance(2, 0, 6, 1)
print("  ", serialize_instance(inst), classify(inst).as_dict())
bad = [
    a for a in enumerate_maximizers(inst, parse_welfare("pmean:1/2")).allocations
    if not is_ef1(inst, a).holds
]
print("   sqrt-mean maximizers that fail EF1:", [a.bundles(2) for a in bad])

print("\neven split (both agents value 6 thirds):")
inst = even_split_instance(1, Fraction(1, 3))
balanced = sum(
    1
    for a in enumerate_maximizers(inst, parse_welfare("log")).allocations
    if len(a.bundle_of(0)) == 3
)
print("   log maximizers are exactly the balanced splits:", balanced, "of them")

print("\noffset good (first good worth b-1 only to agent 1):")
inst = offset_good_instance(2, 1, 1, 7)
rule = parse_welfare("harmonic:-3/4")
for alloc in enumerate_maximizers(inst, rule).allocations:
    print("   maximizer", alloc.bundles(2), "EF1 =", is_ef1(inst, alloc).holds)

print("\nflat-region tie (function flat on (1,2)):")
fn = flat_table_function(1, 2)
inst, balanced, lopsided = flat_tie_gadget(2, 1, 2)
tie = compare(welfare_of(inst, fn, balanced), welfare_of(inst, fn, lopsided))
print("   welfare(balanced) vs welfare(lopsided):", tie.relation.value)
print("   balanced EF1 =", is_ef1(inst, balanced).holds,
      "| lopsided EF1 =", is_ef1(inst, lopsided).holds)
print("   a non-strictly-increasing function may therefore pick a non-EF1 tie")
