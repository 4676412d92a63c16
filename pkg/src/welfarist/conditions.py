"""Bounded verification of the block-increment conditions C1 through C6b.

Each condition quantifies an inequality between block increments
Delta_{f,k}(x) = f((k+1)x) - f(kx) over an infinite domain.  The checkers
exhaust a bounded parameter box (integers up to k_max/a_max/..., or a finite
rational grid for the real-quantified conditions) and report either a
certified violating tuple or "no violation within bounds".

Scans run on a float prescreen with a conservative error margin; every
candidate violation or near-tie is then settled by the exact comparator, so a
Violated verdict always carries an exactly re-verifiable witness and a
NoViolationFound verdict never rests on floating point alone.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from .functions import (
    Log,
    ModHarmonic,
    ModLog,
    PMean,
    WelfareFunction,
    delta,
    increment,
)
from .values import (
    ExactValue,
    ExtendedValue,
    Infinite,
    PrecisionPolicy,
    Relation,
    compare,
    render_value,
    value_sum,
)


class ConditionId(enum.Enum):
    C1 = "C1"
    C1A = "C1a"
    C2 = "C2"
    C3 = "C3"
    C3A = "C3a"
    C3B = "C3b"
    C4 = "C4"
    C5 = "C5"
    C6A = "C6a"
    C6B = "C6b"

    @staticmethod
    def parse(text: str) -> "ConditionId":
        for member in ConditionId:
            if member.value.lower() == text.strip().lower():
                return member
        raise ValueError(f"unknown condition id: {text!r}")


REAL_CONDITIONS = {ConditionId.C1, ConditionId.C1A, ConditionId.C2}

DEFAULT_REAL_GRID = tuple(Fraction(j, 4) for j in range(1, 41))


@dataclass(frozen=True)
class Bounds:
    """Finite parameter box for a bounded check.

    ``b_max`` (second integer scale, defaults to a_max) and ``x_max``
    (argument scale for C6b, defaults to k_max*a_max) derive from the two
    primary bounds unless set explicitly.
    """

    k_max: int = 10
    a_max: int = 10
    real_grid: tuple[Fraction, ...] = DEFAULT_REAL_GRID
    b_max: int | None = None
    x_max: int | None = None
    policy: PrecisionPolicy = field(default_factory=PrecisionPolicy)

    def __post_init__(self):
        if self.k_max < 2 or self.a_max < 1:
            raise ValueError("need k_max >= 2 and a_max >= 1")

    @property
    def b_limit(self) -> int:
        return self.b_max if self.b_max is not None else self.a_max

    @property
    def x_limit(self) -> int:
        return self.x_max if self.x_max is not None else self.k_max * self.a_max

    def grown(self, factor: int = 2) -> "Bounds":
        return replace(
            self,
            k_max=self.k_max * factor,
            a_max=self.a_max * factor,
            b_max=None if self.b_max is None else self.b_max * factor,
            x_max=None if self.x_max is None else self.x_max * factor,
        )

    def as_dict(self) -> dict:
        out = {"k_max": self.k_max, "a_max": self.a_max}
        if self.b_max is not None:
            out["b_max"] = self.b_max
        if self.x_max is not None:
            out["x_max"] = self.x_max
        out["real_grid"] = [str(x) for x in self.real_grid]
        return out


NO_VIOLATION = "NoViolationFound"
VIOLATED = "Violated"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ConditionReport:
    condition: ConditionId
    verdict: str
    bounds: Bounds
    witness: dict | None = None
    lhs: ExtendedValue | None = None
    rhs: ExtendedValue | None = None
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        bounds = self.bounds.as_dict()
        if self.condition not in REAL_CONDITIONS:
            bounds.pop("real_grid", None)
        out = {
            "condition": self.condition.value,
            "verdict": self.verdict,
            "bounds": bounds,
        }
        if self.witness is not None:
            out["witness"] = dict(self.witness)
        if self.lhs is not None:
            out["lhs"] = render_value(self.lhs)
        if self.rhs is not None:
            out["rhs"] = render_value(self.rhs)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# -- single-tuple exact evaluation ---------------------------------------------


def _strictly_greater(lhs, rhs, policy) -> tuple[bool | None, str | None]:
    """Does lhs > rhs hold?  +inf on the left passes; +inf vs +inf fails by convention."""
    if isinstance(lhs, Infinite) and isinstance(rhs, Infinite) and lhs.sign == rhs.sign:
        return False, "infinite compared against infinite"
    ordering = compare(lhs, rhs, policy)
    if ordering.relation is Relation.INCONCLUSIVE:
        return None, None
    return ordering.relation is Relation.GREATER, None


def condition_inequalities(
    fn: WelfareFunction, cond: ConditionId, witness: dict
) -> list[tuple[ExtendedValue, ExtendedValue]]:
    """The strict inequalities (lhs > rhs) the condition asserts at one tuple."""
    w = witness
    if cond is ConditionId.C1 or cond is ConditionId.C3:
        return [(delta(fn, w["k"], w["b"]), delta(fn, w["k"] + 1, w["a"]))]
    if cond is ConditionId.C1A:
        # equality demanded, handled separately
        raise ValueError("C1a is an equality condition")
    if cond is ConditionId.C2:
        lhs = value_sum([fn.value_at(Fraction(w["a"])), fn.value_at(Fraction(w["b"]))])
        rhs = value_sum([fn.value_at(Fraction(w["c"])), fn.value_at(Fraction(w["d"]))])
        return [(rhs, lhs)]  # rhs > lhs is what the condition asserts
    if cond is ConditionId.C3A:
        return [(delta(fn, w["l"], w["b"]), delta(fn, w["k"], w["a"]))]
    if cond is ConditionId.C3B:
        mid = delta(fn, w["k"] + 1, w["a"])
        return [(delta(fn, w["k"], 1), mid), (mid, delta(fn, w["k"] + 2, 1))]
    if cond is ConditionId.C4:
        return [(delta(fn, w["k"], 1), delta(fn, w["k"] + 1, 1))]
    if cond is ConditionId.C5:
        base = w["l"] * w["b"] + w["r"] * w["a"]
        mid = delta(fn, w["k"] + 1, w["a"])
        return [
            (increment(fn, base, base + w["b"]), mid),
            (mid, delta(fn, w["k"] + 2, 1)),
        ]
    if cond is ConditionId.C6A:
        return [
            (
                increment(fn, w["k"] * w["b"] - 1, (w["k"] + 1) * w["b"] - 1),
                delta(fn, w["k"], w["a"]),
            )
        ]
    if cond is ConditionId.C6B:
        return [
            (
                increment(fn, w["y"], w["y"] + w["b"]),
                increment(fn, w["x"], w["x"] + w["a"]),
            )
        ]
    raise ValueError(cond)


def violates(
    fn: WelfareFunction,
    cond: ConditionId,
    witness: dict,
    policy: PrecisionPolicy | None = None,
) -> bool | None:
    """Exactly re-evaluate the condition at one parameter tuple.

    True: the tuple violates the condition.  False: it satisfies it.
    None: the comparison hit the precision ceiling.
    """
    policy = policy or PrecisionPolicy()
    if cond is ConditionId.C1A:
        ordering = compare(
            delta(fn, witness["k"], witness["x"]), delta(fn, witness["k"], witness["y"]), policy
        )
        if ordering.relation is Relation.INCONCLUSIVE:
            return None
        return ordering.relation is not Relation.EQUAL
    saw_inconclusive = False
    for lhs, rhs in condition_inequalities(fn, cond, witness):
        holds, _ = _strictly_greater(lhs, rhs, policy)
        if holds is None:
            saw_inconclusive = True
        elif not holds:
            return True
    return None if saw_inconclusive else False


def _failing_pair(fn, cond, witness, policy):
    """(lhs, rhs, note) of the first failing inequality at a confirmed witness."""
    for lhs, rhs in condition_inequalities(fn, cond, witness):
        holds, note = _strictly_greater(lhs, rhs, policy)
        if holds is False:
            return lhs, rhs, note
    raise AssertionError("witness did not re-verify")


# -- float prescreen helpers -----------------------------------------------------


def _table(fn: WelfareFunction, upto: int) -> tuple[np.ndarray, float]:
    with np.errstate(divide="ignore", invalid="ignore"):
        table = fn.integer_table(upto)
    margin = max(1e-9, 16.0 * fn.table_error_bound(upto))
    return table, margin


def _diff(table: np.ndarray, hi, lo) -> np.ndarray:
    """table[hi]-table[lo] with -inf at lo mapped to +inf (left side passes)."""
    with np.errstate(invalid="ignore"):
        out = table[hi] - table[lo]
    if np.isscalar(out):
        return out
    return out


class _Scan:
    """Shared state for one bounded scan: confirmed verdicts and notes."""

    def __init__(self, fn, cond, bounds):
        self.fn = fn
        self.cond = cond
        self.bounds = bounds
        self.policy = bounds.policy
        self.notes: list[str] = []
        self.inconclusive = False

    def confirm(self, witness: dict) -> ConditionReport | None:
        outcome = violates(self.fn, self.cond, witness, self.policy)
        if outcome is None:
            self.inconclusive = True
            return None
        if not outcome:
            return None
        lhs, rhs, note = _failing_pair(self.fn, self.cond, witness, self.policy)
        notes = tuple(self.notes + ([note] if note else []))
        return ConditionReport(self.cond, VIOLATED, self.bounds, witness, lhs, rhs, notes)

    def finish(self) -> ConditionReport:
        verdict = INCONCLUSIVE if self.inconclusive else NO_VIOLATION
        return ConditionReport(self.cond, verdict, self.bounds, notes=tuple(self.notes))


def check_condition(
    fn: WelfareFunction, cond: ConditionId, bounds: Bounds | None = None
) -> ConditionReport:
    """Exhaustively test one condition inside the bounded parameter box.

    Returns the lexicographically smallest violating tuple when one exists
    within bounds (tuple orders are documented per condition below).
    """
    bounds = bounds or Bounds()
    if cond in REAL_CONDITIONS and not bounds.real_grid:
        raise ValueError("real-quantified conditions need a non-empty grid")
    checker = _CHECKERS[cond]
    return checker(fn, bounds)


# tuple order (k, a, b)
def _check_c3_like(fn, bounds, real: bool, cond) -> ConditionReport:
    scan = _Scan(fn, cond, bounds)
    if real:
        grid = sorted(bounds.real_grid)
        cache: dict[tuple[int, Fraction], ExtendedValue] = {}

        def d(k, x):
            if (k, x) not in cache:
                cache[(k, x)] = delta(fn, k, x)
            return cache[(k, x)]

        for k in range(bounds.k_max + 1):
            for a in grid:
                for b in grid:
                    holds, note = _strictly_greater(d(k, b), d(k + 1, a), scan.policy)
                    if holds is None:
                        scan.inconclusive = True
                    elif not holds:
                        report = scan.confirm({"k": k, "a": a, "b": b})
                        if report:
                            return report
        return scan.finish()
    upto = (bounds.k_max + 2) * max(bounds.a_max, bounds.b_limit)
    table, margin = _table(fn, upto)
    a_idx = np.arange(1, bounds.a_max + 1)
    b_idx = np.arange(1, bounds.b_limit + 1)
    for k in range(bounds.k_max + 1):
        lhs = _diff(table, (k + 1) * b_idx, k * b_idx)
        rhs = _diff(table, (k + 2) * a_idx, (k + 1) * a_idx)
        gap = lhs[None, :] - rhs[:, None]  # rows: a, cols: b
        with np.errstate(invalid="ignore"):
            suspect = ~(gap > margin)
        if not suspect.any():
            continue
        for ai in range(len(a_idx)):
            row = np.nonzero(suspect[ai])[0]
            for bi in row:
                report = scan.confirm({"k": k, "a": int(a_idx[ai]), "b": int(b_idx[bi])})
                if report:
                    return report
    return scan.finish()


def _check_c1(fn, bounds):
    return _check_c3_like(fn, bounds, real=True, cond=ConditionId.C1)


def _check_c3(fn, bounds):
    return _check_c3_like(fn, bounds, real=False, cond=ConditionId.C3)


# tuple order (k, x, y): constancy of Delta_k on the grid, k >= 1
def _check_c1a(fn, bounds):
    scan = _Scan(fn, ConditionId.C1A, bounds)
    grid = sorted(bounds.real_grid)
    for k in range(1, bounds.k_max + 1):
        values = [delta(fn, k, x) for x in grid]
        for i in range(len(grid)):
            for j in range(i + 1, len(grid)):
                ordering = compare(values[i], values[j], scan.policy)
                if ordering.relation is Relation.INCONCLUSIVE:
                    scan.inconclusive = True
                elif ordering.relation is not Relation.EQUAL:
                    witness = {"k": k, "x": grid[i], "y": grid[j]}
                    return ConditionReport(
                        ConditionId.C1A,
                        VIOLATED,
                        bounds,
                        witness,
                        values[i],
                        values[j],
                        tuple(scan.notes),
                    )
    return scan.finish()


# tuple order (a, b, c, d) over the grid, guard min(a,b) <= min(c,d) and ab < cd
def _check_c2(fn, bounds):
    scan = _Scan(fn, ConditionId.C2, bounds)
    grid = sorted(bounds.real_grid)
    n = len(grid)
    margin = 1e-8
    f_float = np.array([fn.approx_scalar(float(x)) for x in grid])
    sum_float = f_float[:, None] + f_float[None, :]
    mins = [[min(grid[i], grid[j]) for j in range(n)] for i in range(n)]
    prods = [[grid[i] * grid[j] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            ab_min, ab_prod = mins[i][j], prods[i][j]
            lhs_float = sum_float[i, j]
            for ci in range(n):
                row_min, row_prod = mins[ci], prods[ci]
                row_sum = sum_float[ci]
                for di in range(n):
                    if row_min[di] < ab_min or row_prod[di] <= ab_prod:
                        continue
                    if row_sum[di] - lhs_float > margin:
                        continue
                    report = scan.confirm(
                        {"a": grid[i], "b": grid[j], "c": grid[ci], "d": grid[di]}
                    )
                    if report:
                        return report
    return scan.finish()


# tuple order (l, k, a, b) with l < k
def _check_c3a(fn, bounds):
    scan = _Scan(fn, ConditionId.C3A, bounds)
    upto = (bounds.k_max + 1) * max(bounds.a_max, bounds.b_limit)
    table, margin = _table(fn, upto)
    a_idx = np.arange(1, bounds.a_max + 1)
    b_idx = np.arange(1, bounds.b_limit + 1)
    lhs_rows = {
        l: _diff(table, (l + 1) * b_idx, l * b_idx) for l in range(bounds.k_max)
    }
    rhs_rows = {
        k: _diff(table, (k + 1) * a_idx, k * a_idx) for k in range(1, bounds.k_max + 1)
    }
    for l in range(bounds.k_max):
        for k in range(l + 1, bounds.k_max + 1):
            gap = lhs_rows[l][None, :] - rhs_rows[k][:, None]
            with np.errstate(invalid="ignore"):
                suspect = ~(gap > margin)
            if not suspect.any():
                continue
            for ai in range(len(a_idx)):
                for bi in np.nonzero(suspect[ai])[0]:
                    report = scan.confirm(
                        {"l": l, "k": k, "a": int(a_idx[ai]), "b": int(b_idx[bi])}
                    )
                    if report:
                        return report
    return scan.finish()


_C3B_TABLE_LIMIT = 6_000_000
_C3B_CHUNK = 1 << 19


def _digamma_rescreen(fn, k: int, a: int) -> bool:
    """Tighter float recheck of a C3b suspect for harmonic families.

    Cumulative-sum tables get loose at deep bounds; the digamma route has a
    ~1e-10 error and weeds out almost all spurious suspects before the exact
    (and expensive) confirmation.
    """
    tight = 1e-9
    left = fn.approx_scalar(float(k + 1)) - fn.approx_scalar(float(k))
    mid = fn.approx_scalar(float((k + 2) * a)) - fn.approx_scalar(float((k + 1) * a))
    right = fn.approx_scalar(float(k + 3)) - fn.approx_scalar(float(k + 2))
    return not (left - mid > tight) or not (mid - right > tight)


# tuple order (k, a); the report notes which inequality of the chain failed
def _check_c3b(fn, bounds):
    scan = _Scan(fn, ConditionId.C3B, bounds)
    if (bounds.k_max + 3) * bounds.a_max <= _C3B_TABLE_LIMIT and bounds.a_max <= 10_000:
        upto = (bounds.k_max + 3) * bounds.a_max
        table, margin = _table(fn, upto)
        a_idx = np.arange(1, bounds.a_max + 1)
        for k in range(bounds.k_max + 1):
            left = _diff(table, k + 1, k)
            right = _diff(table, k + 3, k + 2)
            mid = _diff(table, (k + 2) * a_idx, (k + 1) * a_idx)
            with np.errstate(invalid="ignore"):
                suspect = ~(left - mid > margin) | ~(mid - right > margin)
            for ai in np.nonzero(suspect)[0]:
                a = int(a_idx[ai])
                if isinstance(fn, ModHarmonic) and not _digamma_rescreen(fn, k, a):
                    continue
                report = scan.confirm({"k": k, "a": a})
                if report:
                    return report
        return scan.finish()
    if isinstance(fn, (Log, ModLog)):
        c = float(fn.c) if isinstance(fn, ModLog) else 0.0
        margin = 1e-11

        def left_right(k):
            left = math.inf if (k == 0 and c == 0.0) else math.log(k + 1 + c) - math.log(k + c)
            return left, math.log(k + 3 + c) - math.log(k + 2 + c)

        def mids(k, a_arr):
            return np.log((k + 2) * a_arr + c) - np.log((k + 1) * a_arr + c)

    elif isinstance(fn, ModHarmonic):
        from .functions import _float_digamma_array

        c = float(fn.c)
        margin = 1e-9

        def left_right(k):
            left = math.inf if (k == 0 and c == -1.0) else 1.0 / (k + 1 + c)
            return left, 1.0 / (k + 3 + c)

        def mids(k, a_arr):
            return _float_digamma_array((k + 2) * a_arr + c + 1) - _float_digamma_array(
                (k + 1) * a_arr + c + 1
            )

    else:
        raise ValueError("bounds too large for a tabulated scan of this family")
    for k in range(bounds.k_max + 1):
        left, right = left_right(k)
        start = 1
        while start <= bounds.a_max:
            stop = min(bounds.a_max, start + _C3B_CHUNK - 1)
            a_arr = np.arange(start, stop + 1, dtype=float)
            mid = mids(k, a_arr)
            suspect = ~(left - mid > margin) | ~(mid - right > margin)
            for ai in np.nonzero(suspect)[0]:
                report = scan.confirm({"k": k, "a": int(start + ai)})
                if report:
                    return report
            start = stop + 1
    return scan.finish()


# tuple order (k,)
def _check_c4(fn, bounds):
    scan = _Scan(fn, ConditionId.C4, bounds)
    table, margin = _table(fn, bounds.k_max + 2)
    for k in range(bounds.k_max + 1):
        gap = _diff(table, k + 1, k) - _diff(table, k + 2, k + 1)
        if not gap > margin:
            report = scan.confirm({"k": k})
            if report:
                return report
    return scan.finish()


# tuple order (k, a, b, l, r) with b <= a and the guard (k+1)b > lb + ra
def _check_c5(fn, bounds):
    scan = _Scan(fn, ConditionId.C5, bounds)
    upto = (bounds.k_max + 3) * max(bounds.a_max, bounds.b_limit) + 2
    table, margin = _table(fn, upto)
    for k in range(bounds.k_max + 1):
        right = _diff(table, k + 3, k + 2)
        for a in range(1, bounds.a_max + 1):
            mid = _diff(table, (k + 2) * a, (k + 1) * a)
            mid_bad = not (mid - right > margin)
            for b in range(1, min(a, bounds.b_limit) + 1):
                for l in range(0, k + 1):
                    r_cap = ((k + 1 - l) * b - 1) // a
                    for r in range(0, r_cap + 1):
                        base = l * b + r * a
                        left = _diff(table, base + b, base)
                        if (left - mid > margin) and not mid_bad:
                            continue
                        report = scan.confirm(
                            {"k": k, "a": a, "b": b, "l": l, "r": r}
                        )
                        if report:
                            return report
    return scan.finish()


# tuple order (k, a, b), all three >= 1
def _check_c6a(fn, bounds):
    scan = _Scan(fn, ConditionId.C6A, bounds)
    upto = (bounds.k_max + 1) * max(bounds.a_max, bounds.b_limit) + 1
    table, margin = _table(fn, upto)
    b_idx = np.arange(1, bounds.b_limit + 1)
    for k in range(1, bounds.k_max + 1):
        lhs = _diff(table, (k + 1) * b_idx - 1, k * b_idx - 1)
        for a in range(1, bounds.a_max + 1):
            rhs = _diff(table, (k + 1) * a, k * a)
            with np.errstate(invalid="ignore"):
                suspect = ~(lhs - rhs > margin)
            for bi in np.nonzero(suspect)[0]:
                report = scan.confirm({"k": k, "a": a, "b": int(b_idx[bi])})
                if report:
                    return report
    return scan.finish()


# tuple order (a, b, x, y) with the guard x*b >= (y+1)*a
def _check_c6b(fn, bounds):
    scan = _Scan(fn, ConditionId.C6B, bounds)
    x_lim = bounds.x_limit
    table, margin = _table(fn, x_lim + bounds.a_max + bounds.b_limit + 1)
    x_idx = np.arange(1, x_lim + 1)
    y_idx = np.arange(0, x_lim + 1)
    for a in range(1, bounds.a_max + 1):
        rhs = _diff(table, x_idx + a, x_idx)
        for b in range(1, bounds.b_limit + 1):
            lhs = _diff(table, y_idx + b, y_idx)
            guard = x_idx[:, None] * b >= (y_idx[None, :] + 1) * a
            with np.errstate(invalid="ignore"):
                suspect = guard & ~(lhs[None, :] - rhs[:, None] > margin)
            if not suspect.any():
                continue
            for xi in range(x_lim):
                for yi in np.nonzero(suspect[xi])[0]:
                    report = scan.confirm(
                        {"a": a, "b": b, "x": int(x_idx[xi]), "y": int(y_idx[yi])}
                    )
                    if report:
                        return report
    return scan.finish()


_CHECKERS: dict[ConditionId, Callable] = {
    ConditionId.C1: _check_c1,
    ConditionId.C1A: _check_c1a,
    ConditionId.C2: _check_c2,
    ConditionId.C3: _check_c3,
    ConditionId.C3A: _check_c3a,
    ConditionId.C3B: _check_c3b,
    ConditionId.C4: _check_c4,
    ConditionId.C5: _check_c5,
    ConditionId.C6A: _check_c6a,
    ConditionId.C6B: _check_c6b,
}


# -- closed-form verdicts ----------------------------------------------------------

_INTEGER_CHAIN = {ConditionId.C3, ConditionId.C3A, ConditionId.C3B, ConditionId.C5}
_GENERAL_CHAIN = {ConditionId.C6A, ConditionId.C6B}
_LOG_EQUIV = {ConditionId.C1, ConditionId.C1A, ConditionId.C2}


def _harmonic_below_threshold(c: Fraction, policy: PrecisionPolicy) -> bool:
    """Is c <= 1/log 2 - 1?  Decided as (1+c) log 2 vs 1 (equality impossible)."""
    lhs = ExactValue(logs={Fraction(2): 1 + c})
    ordering = compare(lhs, ExactValue.from_rational(1), policy)
    if ordering.relation is Relation.INCONCLUSIVE:
        raise RuntimeError("threshold comparison hit the precision ceiling")
    return ordering.relation is Relation.LESS


def analytic_verdict(fn: WelfareFunction, cond: ConditionId) -> bool | None:
    """Closed-form satisfaction verdict where a proved characterization covers
    the (family, condition) pair; None where none does.

    The table combines the per-family threshold results (shifted logs satisfy
    the integer chain iff 0 <= c <= 1; modified harmonics iff
    c <= 1/log2 - 1; power means satisfy C4 iff p < 1) with the implication
    graph between the conditions.
    """
    policy = PrecisionPolicy()
    if isinstance(fn, Log):
        return True
    if isinstance(fn, ModLog):
        if fn.c == 0:
            return True
        in_chain = fn.c <= 1
        if cond in _INTEGER_CHAIN or cond in _GENERAL_CHAIN:
            return in_chain
        if cond is ConditionId.C4:
            return True if in_chain else None
        if cond in _LOG_EQUIV:
            return False  # finite value at 0, so not of the form a*log(x)+b
        return None
    if isinstance(fn, ModHarmonic):
        below = _harmonic_below_threshold(fn.c, policy)
        if cond in _INTEGER_CHAIN:
            return below
        if cond in _GENERAL_CHAIN:
            if fn.c < Fraction(-1, 2):
                return False
            if not below:
                return False
            return None  # open band [-1/2, 1/log2 - 1]
        if cond is ConditionId.C4:
            return True if below else None
        if cond is ConditionId.C2 and fn.c > -1:
            return False  # fails EF1 on two-agent normalized instances
        return None
    if isinstance(fn, PMean):
        if fn.p == 0:
            return True
        if cond is ConditionId.C4:
            return fn.p < 1
        if cond in _INTEGER_CHAIN or cond in _GENERAL_CHAIN:
            return False  # only the 0-mean satisfies the integer chain
        if cond in {ConditionId.C1, ConditionId.C1A}:
            return False
        if cond is ConditionId.C2:
            if fn.p < 0:
                return True
            if fn.p >= 1:
                return False  # not strictly concave
            return None
    return None


# -- implication graph -----------------------------------------------------------


def _transfer_c6a_to_c6b(w: dict) -> list[dict]:
    k, a, b = w["k"], w["a"], w["b"]
    return [{"a": a, "b": b, "x": k * a, "y": k * b - 1}]


def _transfer_c5_to_c6a(w: dict) -> list[dict]:
    k, a, b, l, r = w["k"], w["a"], w["b"], w["l"], w["r"]
    candidates = [{"k": k + 1, "a": a, "b": b}, {"k": k + 2, "a": 1, "b": a}]
    base = l * b + r * a
    for t in range(base, (k + 2) * b - 1):
        candidates.append({"k": t + 1, "a": 1, "b": 1})
    for t in range((k + 1) * a, (k + 3) * a - 1):
        candidates.append({"k": t + 1, "a": 1, "b": 1})
    return candidates


def _transfer_c3b_to_c5(w: dict) -> list[dict]:
    k, a = w["k"], w["a"]
    return [{"k": k, "a": a, "b": 1, "l": k, "r": 0}]


def _transfer_c3_to_c3b(w: dict) -> list[dict]:
    k, a, b = w["k"], w["a"], w["b"]
    if b == 1:
        return [{"k": k, "a": a}]
    if a == 1 and k > 0:
        return [{"k": k - 1, "a": b}]
    return []  # the general reduction blows the parameters up; leave unresolved


def _transfer_c3_to_c5(w: dict) -> list[dict]:
    return [c5 for c3b in _transfer_c3_to_c3b(w) for c5 in _transfer_c3b_to_c5(c3b)]


def _transfer_c4_to_c3(w: dict) -> list[dict]:
    return [{"k": w["k"], "a": 1, "b": 1}]


def _transfer_c3a_to_c3(w: dict) -> list[dict]:
    l, k, a, b = w["l"], w["k"], w["a"], w["b"]
    return [{"k": l, "a": a, "b": b}] + [{"k": t, "a": a, "b": a} for t in range(l + 1, k)]


def _transfer_c3b_to_c3a(w: dict) -> list[dict]:
    k, a = w["k"], w["a"]
    return [{"l": k, "k": k + 1, "a": a, "b": 1}, {"l": k + 1, "k": k + 2, "a": 1, "b": a}]


# (stronger, weaker, map from a weaker-side witness to stronger-side candidates)
IMPLICATIONS: tuple[tuple[ConditionId, ConditionId, Callable], ...] = (
    (ConditionId.C6B, ConditionId.C6A, _transfer_c6a_to_c6b),
    (ConditionId.C6A, ConditionId.C5, _transfer_c5_to_c6a),
    (ConditionId.C5, ConditionId.C3B, _transfer_c3b_to_c5),
    (ConditionId.C5, ConditionId.C3, _transfer_c3_to_c5),
    (ConditionId.C3, ConditionId.C4, _transfer_c4_to_c3),
    (ConditionId.C3, ConditionId.C3A, _transfer_c3a_to_c3),
    (ConditionId.C3A, ConditionId.C3B, _transfer_c3b_to_c3a),
    (ConditionId.C3B, ConditionId.C3, _transfer_c3_to_c3b),
)


def _within_bounds(cond: ConditionId, witness: dict, bounds: Bounds) -> bool:
    k_ok = witness.get("k", 0) <= bounds.k_max and witness.get("l", 0) <= bounds.k_max
    a_ok = witness.get("a", 1) <= bounds.a_max
    b_ok = witness.get("b", 1) <= bounds.b_limit
    x_ok = witness.get("x", 1) <= bounds.x_limit and witness.get("y", 0) <= bounds.x_limit
    return k_ok and a_ok and b_ok and x_ok


@dataclass(frozen=True)
class ImplicationReport:
    reports: dict
    inconsistencies: tuple[dict, ...]
    notes: tuple[str, ...]

    @property
    def consistent(self) -> bool:
        return not self.inconsistencies


def find_arrow_inconsistencies(
    fn: WelfareFunction, reports: dict, bounds: Bounds
) -> tuple[tuple[dict, ...], tuple[str, ...]]:
    """Cross-check verdicts against the implication graph.

    For every arrow stronger => weaker with the weaker condition Violated and
    the stronger one reported clean, the weaker witness is transferred to
    candidate stronger-side tuples and re-verified exactly.  A confirmed
    candidate inside the stronger condition's own bounds means the bounded
    scan missed a witness it must contain: a genuine inconsistency.
    """
    inconsistencies = []
    notes = []
    policy = bounds.policy
    for stronger, weaker, transfer in IMPLICATIONS:
        strong_report = reports.get(stronger)
        weak_report = reports.get(weaker)
        if strong_report is None or weak_report is None:
            continue
        if weak_report.verdict != VIOLATED or strong_report.verdict != NO_VIOLATION:
            continue
        resolved = False
        for candidate in transfer(weak_report.witness):
            confirmed = violates(fn, stronger, candidate, policy)
            if confirmed:
                if _within_bounds(stronger, candidate, bounds):
                    inconsistencies.append(
                        {
                            "stronger": stronger.value,
                            "weaker": weaker.value,
                            "weak_witness": weak_report.witness,
                            "missed_witness": candidate,
                        }
                    )
                else:
                    notes.append(
                        f"{weaker.value} violation implies a {stronger.value} witness "
                        f"beyond the shared bounds: {candidate}"
                    )
                resolved = True
                break
        if not resolved:
            notes.append(
                f"{weaker.value} Violated but no {stronger.value} witness transferred "
                f"from {weak_report.witness}"
            )
    return tuple(inconsistencies), tuple(notes)


def implication_scan(fn: WelfareFunction, bounds: Bounds | None = None) -> ImplicationReport:
    """Evaluate all ten conditions under shared bounds and audit the arrows."""
    bounds = bounds or Bounds()
    reports = {cond: check_condition(fn, cond, bounds) for cond in ConditionId}
    inconsistencies, notes = find_arrow_inconsistencies(fn, reports, bounds)
    return ImplicationReport(reports, inconsistencies, notes)


# -- adaptive bounds and threshold bisection ----------------------------------------


def find_witness_adaptive(
    fn: WelfareFunction,
    cond: ConditionId,
    initial: Bounds | None = None,
    growth: int = 2,
    a_cap: int = 1 << 17,
    grow_k: bool = True,
) -> ConditionReport:
    """Grow the bounded box geometrically until a witness appears or the cap is hit.

    Several necessity results only guarantee witnesses for large enough
    parameters, so a fixed box can be silently too small; the returned report
    carries the last bounds used either way.  Block indices saturate at 64
    (or stay fixed with ``grow_k=False``) since the binding tuples of every
    studied family sit at small k while the argument scales run away.
    """
    bounds = initial or Bounds(k_max=4, a_max=8)
    while True:
        report = check_condition(fn, cond, bounds)
        if report.verdict != NO_VIOLATION or bounds.a_max >= a_cap:
            return report
        bounds = replace(
            bounds,
            k_max=min(bounds.k_max * growth, 64) if grow_k else bounds.k_max,
            a_max=bounds.a_max * growth,
            b_max=None if bounds.b_max is None else bounds.b_max * growth,
            x_max=None if bounds.x_max is None else bounds.x_max * growth,
        )


_FAMILIES = {"modlog": ModLog, "harmonic": ModHarmonic}


def threshold_bisect(
    family: str,
    cond: ConditionId,
    c_lo,
    c_hi,
    bounds: Bounds | None = None,
    iters: int = 20,
    a_cap: int = 1 << 17,
) -> tuple[Fraction, Fraction]:
    """Bisect the family parameter on the bounded-verdict boundary.

    Requires differing adaptive verdicts at the endpoints; each probe checks
    the condition with adaptively grown bounds (violations certified exactly,
    clean probes bounded by the cap), and the bracket midpoints stay dyadic so
    probes never land exactly on an irrational threshold.
    """
    if family not in _FAMILIES:
        raise ValueError(f"unknown family {family!r}; use one of {sorted(_FAMILIES)}")
    make = _FAMILIES[family]
    base = bounds or Bounds(k_max=3, a_max=25)

    def verdict(c: Fraction) -> str:
        report = find_witness_adaptive(make(c), cond, base, a_cap=a_cap, grow_k=False)
        if report.verdict == INCONCLUSIVE:
            raise RuntimeError(f"inconclusive verdict at c={c}")
        return report.verdict

    lo, hi = Fraction(c_lo), Fraction(c_hi)
    v_lo, v_hi = verdict(lo), verdict(hi)
    if v_lo == v_hi:
        raise ValueError("bisection needs differing verdicts at the endpoints")
    for _ in range(iters):
        mid = (lo + hi) / 2
        if verdict(mid) == v_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


# -- marginal growth envelope -------------------------------------------------------


def marginal_growth_envelope(fn: WelfareFunction, x_max: int) -> tuple[Fraction, Fraction]:
    """(min, max) of x*(f(x+1)-f(x)) over integer x in [1, x_max], as outer rational bounds.

    Exact when f is rational-valued on the integers; otherwise computed in
    floats and rounded outward by a pad dominating the evaluation error.
    A function in the integer chain keeps this window inside
    [f(3)-f(2), 9*(f(2)-f(1))]; unbounded growth of the window betrays a
    family that leaves the chain.
    """
    if x_max < 1:
        raise ValueError("x_max must be >= 1")
    sample = increment(fn, 1, 2)
    if isinstance(sample, ExactValue) and sample.is_rational:
        lo = hi = None
        for x in range(1, x_max + 1):
            g = x * increment(fn, x, x + 1).as_fraction()
            lo = g if lo is None or g < lo else lo
            hi = g if hi is None or g > hi else hi
        return lo, hi
    xs = np.arange(1, x_max + 2, dtype=float)
    with np.errstate(divide="ignore"):
        vals = fn.approx_array(xs)
    growth = np.arange(1, x_max + 1, dtype=float) * np.diff(vals)
    pad = max(1e-9, 8.0 * fn.table_error_bound(x_max + 1) * x_max)
    return (
        Fraction(float(growth.min())) - Fraction(pad),
        Fraction(float(growth.max())) + Fraction(pad),
    )


# -- numeric lemma suite ---------------------------------------------------------------


@dataclass(frozen=True)
class LemmaCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class LemmaSuiteReport:
    checks: tuple[LemmaCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _reciprocal_log_offset(x, shift: int, prec: int = 160):
    """1/log((x+1)/x) - (x + shift) at high precision."""
    with mpmath.workprec(prec):
        xf = mpmath.mpf(x)
        return 1 / mpmath.log((xf + 1) / xf) - (xf + shift)


def numeric_lemma_suite() -> LemmaSuiteReport:
    """High-precision checks of the numeric facts the threshold analysis leans on:
    the -1/2 limit of 1/log((x+1)/x) - (x+1), and strict monotonicity of
    1/log((x+1)/x) - x on integers (whose value at 1 is the harmonic-family
    threshold 1/log2 - 1).
    """
    checks = []
    with mpmath.workprec(160):
        g = _reciprocal_log_offset(10**6, 1)
        err = abs(g + mpmath.mpf(1) / 2)
        checks.append(
            LemmaCheck(
                "offset_limit_minus_half",
                err < mpmath.mpf(10) ** -3,
                f"g(10^6) = {mpmath.nstr(g, 12)}, |g+1/2| = {mpmath.nstr(err, 3)}",
            )
        )
        h1 = _reciprocal_log_offset(1, 0)
        target = 1 / mpmath.log(2) - 1
        checks.append(
            LemmaCheck(
                "threshold_value",
                abs(h1 - target) < mpmath.mpf(10) ** -30,
                f"h(1) = {mpmath.nstr(h1, 12)} vs 1/log2 - 1 = {mpmath.nstr(target, 12)}",
            )
        )
        prev = h1
        monotone = True
        first_seven = []
        for x in range(2, 1001):
            cur = _reciprocal_log_offset(x, 0)
            if not cur > prev:
                monotone = False
                break
            if x <= 7:
                first_seven.append(cur)
            prev = cur
        checks.append(
            LemmaCheck(
                "offset_strictly_increasing",
                monotone,
                "h strictly increasing on [1, 1000]"
                if monotone
                else f"monotonicity breaks at x = {x}",
            )
        )
        checks.append(
            LemmaCheck(
                "first_seven_chain",
                len(first_seven) == 6 and all(a < b for a, b in zip([h1] + first_seven, first_seven)),
                "h(1) < h(2) < ... < h(7)",
            )
        )
    return LemmaSuiteReport(tuple(checks))
