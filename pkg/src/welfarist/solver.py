"""Maximizers of the additive welfarist objective sum_i f(u_i(A_i)).

Two routes are provided: exhaustive enumeration of all n**m assignment
vectors (the ground truth, returning the complete canonically-ordered argmax
set), and a pruned depth-first search that returns a single maximizer.  The
argmax set matters because the rule breaks ties arbitrarily, so a guarantee
about "the chosen allocation" must hold for every member.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .fairness import is_ef1
from .functions import WelfareFunction
from .model import Allocation, Instance
from .values import (
    ExtendedValue,
    PrecisionPolicy,
    Relation,
    compare,
    value_sum,
)

DEFAULT_ENUMERATION_CAP = 50_000_000


class EnumerationCapExceeded(RuntimeError):
    """The assignment space n**m is larger than the configured cap."""


@dataclass(frozen=True)
class Exactness:
    kind: str  # "Exact" | "IntervalCertified" | "Inconclusive"
    bits: int | None = None


@dataclass(frozen=True)
class MaximizerSet:
    """All welfare-maximizing allocations, ordered by assignment vector."""

    allocations: tuple[Allocation, ...]
    welfare: ExtendedValue
    exactness: Exactness

    def __contains__(self, alloc: Allocation) -> bool:
        return alloc in self.allocations


class _ValueCache:
    def __init__(self, fn: WelfareFunction, bits: int):
        self.fn = fn
        self.bits = bits
        self._cache: dict[Fraction, ExtendedValue] = {}

    def __call__(self, x: Fraction) -> ExtendedValue:
        v = self._cache.get(x)
        if v is None:
            v = self.fn.value_at(x, self.bits)
            self._cache[x] = v
        return v


def welfare_of(inst: Instance, fn: WelfareFunction, alloc: Allocation, bits: int = 256) -> ExtendedValue:
    """Welfare of one allocation; -inf as soon as any bundle hits f = -inf."""
    alloc.validate_for(inst)
    utilities = [Fraction(0)] * inst.n
    for g, agent in enumerate(alloc.assignment):
        utilities[agent] += inst.utilities[agent][g]
    return value_sum([fn.value_at(u, bits) for u in utilities])


def enumerate_maximizers(
    inst: Instance,
    fn: WelfareFunction,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    policy: PrecisionPolicy | None = None,
) -> MaximizerSet:
    """Scan every assignment vector and return the full argmax set.

    Comparisons run through the exact/interval comparator; an inconclusive
    comparison keeps the candidate (the set may then be a superset of the true
    argmax) and is reported through the exactness flag.
    """
    policy = policy or PrecisionPolicy()
    if inst.n**inst.m > cap:
        raise EnumerationCapExceeded(f"{inst.n}**{inst.m} exceeds cap {cap}")
    value = _ValueCache(fn, policy.start_bits)
    best_value: ExtendedValue | None = None
    best: list[tuple[int, ...]] = []
    max_bits = 0
    inconclusive = False
    for assignment in itertools.product(range(inst.n), repeat=inst.m):
        utilities = [Fraction(0)] * inst.n
        for g, agent in enumerate(assignment):
            utilities[agent] += inst.utilities[agent][g]
        welfare = value_sum([value(u) for u in utilities])
        if best_value is None:
            best_value, best = welfare, [assignment]
            continue
        ordering = compare(welfare, best_value, policy)
        if ordering.bits:
            max_bits = max(max_bits, ordering.bits)
        if ordering.relation is Relation.GREATER:
            best_value, best = welfare, [assignment]
        elif ordering.relation is Relation.EQUAL:
            best.append(assignment)
        elif ordering.relation is Relation.INCONCLUSIVE:
            inconclusive = True
            best.append(assignment)
    if inconclusive:
        exactness = Exactness("Inconclusive", max_bits or None)
    elif max_bits:
        exactness = Exactness("IntervalCertified", max_bits)
    else:
        exactness = Exactness("Exact")
    allocations = tuple(Allocation(a) for a in sorted(best))
    return MaximizerSet(allocations, best_value, exactness)


def solve_branch_bound(
    inst: Instance,
    fn: WelfareFunction,
    *,
    policy: PrecisionPolicy | None = None,
) -> tuple[Allocation, ExtendedValue]:
    """One maximizer via depth-first search with an optimistic completion bound.

    The bound adds every unassigned good to every agent simultaneously; since
    f is increasing this can only overestimate, so pruning on bound <= incumbent
    is safe.  Requires strictly increasing f (falls back to enumeration
    otherwise, where ties against the flat regions matter).
    """
    policy = policy or PrecisionPolicy()
    if not fn.strictly_increasing:
        maxima = enumerate_maximizers(inst, fn, policy=policy)
        return maxima.allocations[0], maxima.welfare
    value = _ValueCache(fn, policy.start_bits)
    order = sorted(
        range(inst.m),
        key=lambda g: max(inst.utilities[i][g] for i in range(inst.n)),
        reverse=True,
    )
    suffix = [[Fraction(0)] * inst.n for _ in range(inst.m + 1)]
    for pos in range(inst.m - 1, -1, -1):
        g = order[pos]
        for i in range(inst.n):
            suffix[pos][i] = suffix[pos + 1][i] + inst.utilities[i][g]

    incumbent_assignment = tuple([0] * inst.m)
    incumbent_value = welfare_of(inst, fn, Allocation(incumbent_assignment))
    utilities = [Fraction(0)] * inst.n
    partial: list[int] = []

    def bound_value(pos: int) -> ExtendedValue:
        return value_sum([value(utilities[i] + suffix[pos][i]) for i in range(inst.n)])

    def descend(pos: int):
        nonlocal incumbent_assignment, incumbent_value
        if pos == inst.m:
            welfare = value_sum([value(u) for u in utilities])
            ordering = compare(welfare, incumbent_value, policy)
            if ordering.relation is Relation.GREATER:
                assignment = [0] * inst.m
                for position, agent in enumerate(partial):
                    assignment[order[position]] = agent
                incumbent_assignment = tuple(assignment)
                incumbent_value = welfare
            return
        ordering = compare(bound_value(pos), incumbent_value, policy)
        if ordering.relation in (Relation.LESS, Relation.EQUAL):
            return
        g = order[pos]
        for agent in range(inst.n):
            utilities[agent] += inst.utilities[agent][g]
            partial.append(agent)
            descend(pos + 1)
            partial.pop()
            utilities[agent] -= inst.utilities[agent][g]

    descend(0)
    return Allocation(incumbent_assignment), incumbent_value


def chosen_all_ef1(
    inst: Instance,
    fn: WelfareFunction,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    policy: PrecisionPolicy | None = None,
) -> tuple[bool, Allocation | None]:
    """Is every welfare-maximizing allocation EF1?  Returns a violating maximizer if not."""
    maxima = enumerate_maximizers(inst, fn, cap=cap, policy=policy)
    for alloc in maxima.allocations:
        if not is_ef1(inst, alloc).holds:
            return False, alloc
    return True, None


def split_family_argmax(k: int, fn: WelfareFunction, *, policy: PrecisionPolicy | None = None) -> int:
    """Welfare-maximizing x over the structured two-agent split family.

    For the doubling-pairs instance with parameter k, the candidate
    allocations give agent 1 exactly x of the first k goods (utility 4x) and
    agent 2 everything else (utility 4k+1-2x), with x ranging over
    [ceil(k/2), k].  The reduction itself is validated against full
    enumeration in the test suite for small k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not fn.strictly_increasing:
        raise ValueError("requires a strictly increasing function")
    policy = policy or PrecisionPolicy()
    best_x: int | None = None
    best_value: ExtendedValue | None = None
    for x in range(ceil(Fraction(k, 2)), k + 1):
        welfare = value_sum(
            [fn.value_at(Fraction(4 * x)), fn.value_at(Fraction(4 * k + 1 - 2 * x))]
        )
        if best_value is None:
            best_x, best_value = x, welfare
            continue
        ordering = compare(welfare, best_value, policy)
        if ordering.relation is Relation.INCONCLUSIVE:
            raise RuntimeError("inconclusive comparison in structured argmax")
        if ordering.relation is Relation.GREATER:
            best_x, best_value = x, welfare
    assert best_x is not None
    return best_x
