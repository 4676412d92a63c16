"""Exact/interval value arithmetic and the three-tier comparator."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from welfarist.values import (
    NEG_INF,
    POS_INF,
    ExactValue,
    IntervalValue,
    PrecisionPolicy,
    Relation,
    compare,
    evaluate_interval,
    render_value,
    sqrt_of_fraction,
    square_free_split,
    value_sum,
)

rationals = st.fractions(min_value=-(10**6), max_value=10**6, max_denominator=10**4)


def rel(lhs, rhs, **kw):
    return compare(lhs, rhs, **kw).relation


class TestExactTiers:
    def test_log_product_identity(self):
        lhs = value_sum([ExactValue.from_log(2), ExactValue.from_log(3)])
        assert rel(lhs, ExactValue.from_log(6)) is Relation.EQUAL

    def test_log_order_is_product_order(self):
        assert rel(ExactValue.from_log(Fraction(7, 2)), ExactValue.from_log(3)) is Relation.GREATER
        assert rel(ExactValue.from_log(Fraction(2, 3)), ExactValue.from_log(1)) is Relation.LESS

    def test_rational_sums(self):
        lhs = value_sum([ExactValue.from_rational(Fraction(1, 3))] * 3)
        assert rel(lhs, ExactValue.from_rational(1)) is Relation.EQUAL

    def test_surd_like_terms_cancel(self):
        # sqrt(12) == 2*sqrt(3) == sqrt(3) + sqrt(3)
        lhs = ExactValue.from_sqrt(12)
        rhs = value_sum([ExactValue.from_sqrt(3), ExactValue.from_sqrt(3)])
        assert rel(lhs, rhs) is Relation.EQUAL

    def test_surd_vs_rational_decided_by_intervals(self):
        # sqrt(12) - sqrt(6) > 1, decided well below the ceiling
        lhs = value_sum([ExactValue.from_sqrt(12), ExactValue.from_sqrt(6).neg()])
        ordering = compare(lhs, ExactValue.from_rational(1))
        assert ordering.relation is Relation.GREATER
        assert ordering.bits is not None and ordering.bits >= 64

    def test_mixed_log_and_rational_equal_only_componentwise(self):
        lhs = value_sum([ExactValue.from_log(2), ExactValue.from_rational(Fraction(1, 2))])
        rhs = value_sum([ExactValue.from_log(2), ExactValue.from_rational(Fraction(1, 2))])
        assert rel(lhs, rhs) is Relation.EQUAL
        assert rel(lhs, ExactValue.from_log(2)) is Relation.GREATER


class TestInfinities:
    def test_equal_by_convention(self):
        assert rel(NEG_INF, NEG_INF) is Relation.EQUAL
        assert rel(POS_INF, POS_INF) is Relation.EQUAL

    def test_signs(self):
        assert rel(NEG_INF, POS_INF) is Relation.LESS
        assert rel(POS_INF, ExactValue.from_rational(10**9)) is Relation.GREATER
        assert rel(NEG_INF, ExactValue.from_rational(-(10**9))) is Relation.LESS

    def test_neg_inf_absorbs_sums(self):
        total = value_sum([ExactValue.from_log(5), NEG_INF, ExactValue.from_rational(3)])
        assert total is NEG_INF

    def test_opposite_infinities_error(self):
        with pytest.raises(ValueError):
            value_sum([NEG_INF, POS_INF])


class TestSquarefree:
    @pytest.mark.parametrize(
        "n,expected",
        [(1, (1, 1)), (4, (2, 1)), (12, (2, 3)), (72, (6, 2)), (97, (1, 97)), (0, (0, 1))],
    )
    def test_split(self, n, expected):
        assert square_free_split(n) == expected

    def test_sqrt_of_fraction(self):
        coeff, d = sqrt_of_fraction(Fraction(9, 4))
        assert (coeff, d) == (Fraction(3, 2), 1)
        coeff, d = sqrt_of_fraction(Fraction(1, 2))
        assert (coeff, d) == (Fraction(1, 2), 2)  # sqrt(1/2) = sqrt(2)/2


class TestIntervals:
    def test_enclosure_contains_truth(self):
        import mpmath

        v = ExactValue(logs={Fraction(2): Fraction(1)})
        enc = evaluate_interval(v, 128)
        with mpmath.workprec(256):
            assert enc.lo <= mpmath.log(2) <= enc.hi
        assert float(enc.width) < 1e-30

    def test_fixed_overlapping_intervals_are_inconclusive(self):
        a = IntervalValue(0.0, 1.0, 53)
        b = IntervalValue(0.5, 1.5, 53)
        assert rel(a, b) is Relation.INCONCLUSIVE

    def test_ceiling_yields_inconclusive(self):
        # an exact tie fed through the interval tier only
        lhs = IntervalValue(0.0, 1e-40, 53)
        rhs = ExactValue.from_rational(0)
        ordering = compare(lhs, rhs, policy=PrecisionPolicy(start_bits=64, ceiling_bits=128))
        assert ordering.relation is Relation.INCONCLUSIVE


def test_precision_ceiling_env_override(monkeypatch):
    from welfarist.values import precision_ceiling

    monkeypatch.setenv("WELFARIST_PRECISION_CEILING", "512")
    assert precision_ceiling() == 512
    assert PrecisionPolicy().ceiling() == 512
    assert PrecisionPolicy(ceiling_bits=128).ceiling() == 128


@given(a=rationals, b=rationals)
def test_compare_matches_fraction_order(a, b):
    got = rel(ExactValue.from_rational(a), ExactValue.from_rational(b))
    want = Relation.LESS if a < b else Relation.GREATER if a > b else Relation.EQUAL
    assert got is want


@given(st.lists(rationals, min_size=3, max_size=3))
def test_antisymmetry_and_transitivity_on_exact_mixtures(xs):
    flip = {Relation.LESS: Relation.GREATER, Relation.GREATER: Relation.LESS,
            Relation.EQUAL: Relation.EQUAL}
    values = [
        value_sum(
            [ExactValue.from_log(1 + abs(x) + 1), ExactValue.from_rational(x)]
        )
        for x in xs
    ]
    orders = {}
    for i in range(3):
        for j in range(3):
            orders[(i, j)] = rel(values[i], values[j])
    for i in range(3):
        for j in range(3):
            assert orders[(j, i)] is flip[orders[(i, j)]]
    for i, j, k in [(0, 1, 2), (2, 1, 0), (1, 0, 2)]:
        if orders[(i, j)] is Relation.LESS and orders[(j, k)] is Relation.LESS:
            assert orders[(i, k)] is Relation.LESS


def test_render_value_kinds():
    assert render_value(ExactValue.from_rational(Fraction(25, 12))) == {
        "kind": "rational",
        "value": "25/12",
    }
    assert render_value(ExactValue.from_log(4)) == {"kind": "log", "argument": "4"}
    assert render_value(NEG_INF) == {"kind": "neg_inf"}
    surd = render_value(ExactValue.from_sqrt(2))
    assert surd["kind"] == "exact" and surd["decimal"].startswith("1.41421356")
