"""Which rules keep every maximizer EF1?  Check the conditions that decide it.

The EF1 guarantee of a rule on a restricted instance class boils down to
inequalities between block increments Delta_{f,k}(x) = f((k+1)x) - f(kx).
This script runs the bounded checkers over the shifted-log and shifted-
harmonic families, shows where witnesses appear, and bisects each family's
parameter to locate the boundary.
"""

from fractions import Fraction

from welfarist.conditions import (
    Bounds,
    ConditionId,
    analytic_verdict,
    check_condition,
    find_witness_adaptive,
    threshold_bisect,
)
from welfarist.functions import parse_welfare

print("shifted logs log(x+c): the chain condition holds exactly for c <= 1")
for c in ["0", "1/2", "1", "3/2", "2"]:
    fn = parse_welfare(f"modlog:{c}")
    report = check_condition(fn, ConditionId.C3B, Bounds(k_max=10, a_max=40))
    stated = analytic_verdict(fn, ConditionId.C3B)
    print(f"  c = {c:>3}: bounded -> {report.verdict:17s} closed form -> {stated}")
    if report.witness:
        print(f"          witness {report.witness}")

print("\nshifted harmonics: the boundary is 1/log2 - 1 = 0.4427...")
for c in ["0", "2/5", "1/2", "1"]:
    fn = parse_welfare(f"harmonic:{c}")
    report = find_witness_adaptive(fn, ConditionId.C3B, Bounds(k_max=4, a_max=8))
    print(f"  c = {c:>3}: {report.verdict}", report.witness or "")

print("\nharmonics with c < -1/2 break on general integer instances:")
report = find_witness_adaptive(
    parse_welfare("harmonic:-3/4"), ConditionId.C6A, Bounds(k_max=4, a_max=8)
)
print("  c = -3/4:", report.verdict, report.witness)

print("\nbisecting the shifted-log family on the chain condition:")
lo, hi = threshold_bisect(
    "modlog", ConditionId.C3B, Fraction(1, 2), Fraction(2),
    Bounds(k_max=3, a_max=25), iters=12, a_cap=1 << 15,
)
print(f"  boundary bracketed by [{float(lo):.6f}, {float(hi):.6f}] (true value: 1)")
