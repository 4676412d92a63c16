"""Deterministic generators for the structured instances used in analysis.

Each generator builds one family of instances whose welfare-maximizing
allocations separate rules or force a specific inequality.  Parameters are
exact rationals throughout; class membership claims about each family are
asserted by the test suite via ``classify``.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor

from .functions import PiecewiseTable
from .model import Allocation, Instance


def chain_instance(n: int) -> Instance:
    """n agents, n goods: agent 1 values g_1 at n; agent i values g_{i-1} at n-1 and g_i at 1.

    The unique allocation giving everyone positive utility assigns g_i to
    agent i (utilitarian total 2n-1), while shifting the middle goods one
    agent down yields total n^2-2n+3.  Requires n >= 4 so the two allocations
    differ meaningfully.
    """
    if n < 4:
        raise ValueError("chain instance needs n >= 4")
    rows = [[Fraction(0)] * n for _ in range(n)]
    rows[0][0] = Fraction(n)
    for i in range(1, n):
        rows[i][i - 1] = Fraction(n - 1)
        rows[i][i] = Fraction(1)
    return Instance.from_rows(rows)


def chain_positive_allocation(n: int) -> Allocation:
    """The diagonal allocation g_i -> agent i."""
    return Allocation(tuple(range(n)))


def chain_shifted_allocation(n: int) -> Allocation:
    """g_1 -> agent 1, g_i -> agent i+1 for middle goods, g_n -> agent n."""
    assignment = [0] + [i + 1 for i in range(1, n - 1)] + [n - 1]
    return Allocation(tuple(assignment))


def uniform_goods_instance(n: int, k: int, a, b) -> Instance:
    """(k+1)n identical goods, worth ``a`` each to agent 1 and ``b`` to the rest.

    The balanced allocation (k+1 goods each) is the only EF1 allocation, which
    pins down the block-increment inequality for any rule choosing it.
    """
    a, b = Fraction(a), Fraction(b)
    if n < 2 or k < 0 or a <= 0 or b <= 0:
        raise ValueError("need n >= 2, k >= 0 and positive values")
    m = (k + 1) * n
    rows = [[a] * m] + [[b] * m for _ in range(n - 1)]
    return Instance.from_rows(rows)


def normalized_three_instance(n: int, k: int, a, b, eps) -> Instance:
    """Normalized instance with a dedicated high-value good for the last agent.

    m = k(n-1)+2 goods; the last two goods play special roles and all row sums
    equal max(kna, knb).  Needs n >= 3, k >= 1, a, b > 0 and 0 < eps < b.
    """
    a, b, eps = Fraction(a), Fraction(b), Fraction(eps)
    if n < 3 or k < 1 or a <= 0 or b <= 0 or not 0 < eps < b:
        raise ValueError("parameter ranges violated")
    m = k * (n - 1) + 2
    c = max(k * n * a, k * n * b)
    shared = k * (n - 1)  # goods valued by everyone but the last agent
    rows = []
    row1 = [b] * shared + [b - eps, c - k * (n - 1) * b - (b - eps)]
    rows.append(row1)
    for _ in range(1, n - 1):
        rows.append([a] * shared + [Fraction(0), c - k * (n - 1) * a])
    rows.append([Fraction(0)] * shared + [Fraction(0), c])
    inst = Instance.from_rows(rows)
    assert all(sum(r, Fraction(0)) == c for r in inst.utilities)
    return inst


def even_split_instance(c, delta) -> Instance:
    """Two agents and 2*ceil(c/delta) goods, each worth c/ceil(c/delta) to both.

    The balanced split is the only EF1 allocation; an off-by-one split probes
    concavity of the welfare function around c.
    """
    c, delta = Fraction(c), Fraction(delta)
    if not 0 < delta < c:
        raise ValueError("need 0 < delta < c")
    pieces = ceil(c / delta)
    value = c / pieces
    rows = [[value] * (2 * pieces), [value] * (2 * pieces)]
    return Instance.from_rows(rows)


def binary_overlap_instance(n: int, k: int) -> Instance:
    """Binary instance: agents 1,2 contest 2k+2 shared goods; others hold private goods.

    m = 2k+n.  Agent i >= 3 values only good 2k+i.
    """
    if n < 2 or k < 0:
        raise ValueError("need n >= 2 and k >= 0")
    m = 2 * k + n
    rows = [[Fraction(0)] * m for _ in range(n)]
    for i in (0, 1):
        for g in range(2 * k + 2):
            rows[i][g] = Fraction(1)
    for i in range(2, n):
        rows[i][2 * k + i] = Fraction(1)
    return Instance.from_rows(rows)


def two_value_mix_instance(n: int, k: int, l: int, r: int, a: int, b: int) -> Instance:
    """Integer two-value instance with (k+1)(n-1)+l+r+1 goods.

    Agent 1 values the first r goods at ``a`` and the rest at ``b``; all other
    agents value everything at ``a``.  Requires a >= b > 0 and the guard
    (k+1)b > lb + ra.
    """
    if n < 2 or k < 0 or l < 0 or r < 0 or not a >= b > 0:
        raise ValueError("parameter ranges violated")
    if not (k + 1) * b > l * b + r * a:
        raise ValueError("guard (k+1)b > lb + ra violated")
    m = (k + 1) * (n - 1) + l + r + 1
    a, b = Fraction(a), Fraction(b)
    rows = [[a] * r + [b] * (m - r)]
    for _ in range(1, n):
        rows.append([a] * m)
    return Instance.from_rows(rows)


def offset_good_instance(n: int, k: int, a: int, b: int) -> Instance:
    """kn+1 goods: a first good worth b-1 only to agent 1, then uniform blocks.

    Agent 1 values the remaining kn goods at ``b``; everyone else values them
    at ``a`` and the first good at 0.
    """
    if n < 2 or k < 1 or a < 1 or b < 1:
        raise ValueError("parameter ranges violated")
    m = k * n + 1
    rows = [[Fraction(b - 1)] + [Fraction(b)] * (k * n)]
    for _ in range(1, n):
        rows.append([Fraction(0)] + [Fraction(a)] * (k * n))
    return Instance.from_rows(rows)


def flat_table_function(a, b) -> PiecewiseTable:
    """A continuous non-decreasing piecewise-linear function, flat exactly on (a, b)."""
    a, b = Fraction(a), Fraction(b)
    if not 0 < a < b:
        raise ValueError("need 0 < a < b")
    return PiecewiseTable([0, a, b], [1, 0, 1])


def flat_tie_gadget(n: int, flat_lo, flat_hi) -> tuple[Instance, Allocation, Allocation]:
    """Instance on which a function flat on (flat_lo, flat_hi) ties a non-EF1 allocation.

    Picks d = floor(3/(hi-lo)) + 1 and the smallest c with (c-1)/d, c/d,
    (c+1)/d all inside the flat region, then returns the nc-good instance
    where every good is worth 1/d to everyone, together with the balanced
    allocation (EF1) and the c+1/c-1 lopsided allocation (not EF1) whose
    welfare ties under any function flat on the region.
    """
    lo, hi = Fraction(flat_lo), Fraction(flat_hi)
    if n < 2 or not 0 < lo < hi:
        raise ValueError("need n >= 2 and 0 < flat_lo < flat_hi")
    d = floor(Fraction(3) / (hi - lo)) + 1
    c = floor(lo * d) + 2  # one past the smallest integer with c/d > lo
    if not (lo < Fraction(c - 1, d) and Fraction(c + 1, d) < hi):
        raise AssertionError("no valid block size, flat interval too narrow")
    m = n * c
    rows = [[Fraction(1, d)] * m for _ in range(n)]
    inst = Instance.from_rows(rows)
    balanced = Allocation(tuple(g // c for g in range(m)))
    lopsided_assignment = []
    for g in range(m):
        if g < c + 1:
            lopsided_assignment.append(0)
        elif g < 2 * c:
            lopsided_assignment.append(1)
        else:
            lopsided_assignment.append(g // c)
    lopsided = Allocation(tuple(lopsided_assignment))
    return inst, balanced, lopsided


def nine_goods_instance(z) -> Instance:
    """Two-agent normalized instance with 9 goods scaled by z > 0.

    Agent 1: eight goods at 3z and one at z; agent 2: five goods at 5z and
    four at 0.  Both rows sum to 25z.
    """
    z = Fraction(z)
    if z <= 0:
        raise ValueError("scale must be positive")
    row1 = [3 * z] * 8 + [z]
    row2 = [5 * z] * 5 + [Fraction(0)] * 4
    return Instance.from_rows([row1, row2])


def doubling_pairs_instance(k: int) -> Instance:
    """Two agents, 2k+1 goods: agent 1 sees k fours then a one; agent 2 sees twos.

    Agent 1: utility 4 on goods 1..k, 1 on good k+1, 0 afterwards.
    Agent 2: utility 2 on goods 1..2k and 1 on the last good.  Normalized
    (both rows sum to 4k+1).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    row1 = [Fraction(4)] * k + [Fraction(1)] + [Fraction(0)] * k
    row2 = [Fraction(2)] * (2 * k) + [Fraction(1)]
    return Instance.from_rows([row1, row2])


# CLI registry: name -> (callable, parameter names, integer-only flags)
GENERATORS = {
    "chain": (chain_instance, ("n",), (True,)),
    "uniform-goods": (uniform_goods_instance, ("n", "k", "a", "b"), (True, True, False, False)),
    "normalized-three": (
        normalized_three_instance,
        ("n", "k", "a", "b", "eps"),
        (True, True, False, False, False),
    ),
    "even-split": (even_split_instance, ("c", "delta"), (False, False)),
    "binary-overlap": (binary_overlap_instance, ("n", "k"), (True, True)),
    "two-value-mix": (
        two_value_mix_instance,
        ("n", "k", "l", "r", "a", "b"),
        (True,) * 6,
    ),
    "offset-good": (offset_good_instance, ("n", "k", "a", "b"), (True,) * 4),
    "nine-goods": (nine_goods_instance, ("z",), (False,)),
    "doubling-pairs": (doubling_pairs_instance, ("k",), (True,)),
}
