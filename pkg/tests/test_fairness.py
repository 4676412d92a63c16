"""EF1 / EF / Pareto predicates, including the existential-definition oracle."""

import itertools
import random
from fractions import Fraction

from welfarist.constructions import chain_instance, chain_shifted_allocation
from welfarist.fairness import is_ef, is_ef1, is_pareto_optimal
from welfarist.model import Allocation, Instance, random_instance


def ef1_existential(inst, alloc):
    """Direct remove-one-good definition; independent of the max-good shortcut."""
    bundles = alloc.bundles(inst.n)
    for i in range(inst.n):
        own = inst.bundle_utility(i, bundles[i])
        for j in range(inst.n):
            if i == j or not bundles[j]:
                continue
            fine = any(
                own >= inst.bundle_utility(i, [g for g in bundles[j] if g != drop])
                for drop in bundles[j]
            )
            if not fine:
                return False
    return True


class TestEf1:
    def test_chain_diagonal_and_shifted_both_pass(self):
        inst = chain_instance(4)
        assert is_ef1(inst, Allocation((0, 1, 2, 3))).holds
        assert is_ef1(inst, chain_shifted_allocation(4)).holds

    def test_concentrated_identical_goods_fail(self):
        inst = Instance.from_rows([[1, 1], [1, 1]])
        report = is_ef1(inst, Allocation((0, 0)))
        assert not report.holds
        assert report.violations == ((1, 0, Fraction(1)),)

    def test_empty_envied_bundle_is_skipped(self):
        inst = Instance.from_rows([[1, 1], [1, 1]])
        report = is_ef1(inst, Allocation((0, 1)))
        assert report.holds

    def test_margin_value(self):
        inst = Instance.from_rows([[0, 5, 5, 5], [1, 0, 0, 0]])
        report = is_ef1(inst, Allocation((0, 1, 1, 1)))
        # agent 0 keeps a worthless good; dropping one 5 still leaves 10
        assert report.violations == ((0, 1, Fraction(10)),)

    def test_agreement_with_existential_definition(self):
        for seed in range(150):
            rng = random.Random(seed)
            n, m = rng.randint(2, 3), rng.randint(0, 5)
            inst = random_instance(n, m, "integer", 3, seed=seed)
            for assignment in itertools.product(range(n), repeat=m):
                alloc = Allocation(assignment)
                assert is_ef1(inst, alloc).holds == ef1_existential(inst, alloc)


class TestEf:
    def test_single_contested_good(self):
        inst = Instance.from_rows([[1], [1]])
        assert not is_ef(inst, Allocation((0,)))

    def test_all_zero_utilities(self):
        inst = Instance.from_rows([[0, 0], [0, 0]])
        assert is_ef(inst, Allocation((0, 0)))

    def test_disjoint_fans(self):
        inst = Instance.from_rows([[1, 0], [0, 1]])
        assert is_ef(inst, Allocation((0, 1)))

    def test_ef_implies_ef1(self):
        for seed in range(80):
            rng = random.Random(1000 + seed)
            n, m = rng.randint(2, 3), rng.randint(0, 5)
            inst = random_instance(n, m, "unrestricted", 4, seed=seed)
            for _ in range(5):
                alloc = Allocation(tuple(rng.randrange(n) for _ in range(m)))
                if is_ef(inst, alloc):
                    assert is_ef1(inst, alloc).holds


class TestPareto:
    def test_chain_shifted_is_po(self):
        inst = chain_instance(4)
        assert is_pareto_optimal(inst, chain_shifted_allocation(4)).verdict == "PO"

    def test_wasted_good_is_dominated(self):
        inst = Instance.from_rows([[1], [0]])
        result = is_pareto_optimal(inst, Allocation((1,)))
        assert result.verdict == "Dominated"
        assert result.dominator.assignment == (0,)

    def test_budget_exceeded(self):
        inst = Instance.from_rows([[1] * 20, [1] * 20])
        balanced = Allocation(tuple(g % 2 for g in range(20)))
        assert is_pareto_optimal(inst, balanced, budget=1000).verdict == "BudgetExceeded"

    def test_dominator_is_lexicographically_least(self):
        inst = Instance.from_rows([[1, 1], [0, 0]])
        result = is_pareto_optimal(inst, Allocation((1, 1)))
        assert result.verdict == "Dominated"
        assert result.dominator.assignment == (0, 0)
