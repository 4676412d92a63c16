"""Numerical evaluation of the modified-harmonic integral extension.

``harmonic_integral(c, x, abs_tol)`` encloses the defining integral

    h_c(x)  = integral over (0,1) of (t**c - t**(x+c)) / (1 - t)   for c > -1
    h_-1(x) = integral over (0,1) of (1 - t**(x-1)) / (1 - t)

by adaptive composite Gauss-Legendre quadrature in arbitrary precision.
Both integrands have the shape (t**e1 - t**e2)/(1-t) with e1, e2 > -1.  A
negative exponent produces an integrable singularity at t = 0, removed by the
substitution t = s**(1/(1+emin)); the endpoint t = 1 is a removable point
(limit e2 - e1) that quadrature nodes never touch.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath

from .values import IntervalValue


class DivergentIntegralError(ValueError):
    """The requested point of the integral family diverges."""


class QuadratureError(RuntimeError):
    """The requested tolerance was not reached within the refinement budget."""


@lru_cache(maxsize=None)
def _legendre_nodes(order: int, prec: int):
    """Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration."""
    with mpmath.workprec(prec):
        nodes, weights = [], []
        for i in range(1, order + 1):
            # Chebyshev-like initial guess
            x = mpmath.cos(mpmath.pi * (i - mpmath.mpf(1) / 4) / (order + mpmath.mpf(1) / 2))
            for _ in range(60):
                p0, p1 = mpmath.mpf(1), x
                for k in range(2, order + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = order * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpmath.ldexp(1, -(prec - 8)):
                    break
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
        return tuple(nodes), tuple(weights)


def _panel_sum(f, a, b, order: int, prec: int):
    nodes, weights = _legendre_nodes(order, prec)
    half = (b - a) / 2
    mid = (b + a) / 2
    return half * mpmath.fsum(w * f(mid + half * x) for x, w in zip(nodes, weights))


def _adaptive(f, abs_tol, prec, max_panels=4000):
    """Composite GL(12)/GL(24) refinement on [0, 1]; returns (value, error_estimate)."""
    with mpmath.workprec(prec):
        stack = [(mpmath.mpf(0), mpmath.mpf(1))]
        total = mpmath.mpf(0)
        err_total = mpmath.mpf(0)
        panels = 0
        while stack:
            a, b = stack.pop()
            panels += 1
            if panels > max_panels:
                raise QuadratureError("refinement budget exhausted")
            coarse = _panel_sum(f, a, b, 12, prec)
            fine = _panel_sum(f, a, b, 24, prec)
            disc = abs(fine - coarse)
            if disc <= abs_tol * (b - a) / 8 or (b - a) < mpmath.ldexp(1, -64):
                total += fine
                err_total += disc
            else:
                mid = (a + b) / 2
                stack.append((a, mid))
                stack.append((mid, b))
        return total, err_total


def _exponent_pair(c: Fraction, x: Fraction) -> tuple[Fraction, Fraction]:
    if c == -1:
        return Fraction(0), x - 1
    return c, x + c


def harmonic_integral(c, x, abs_tol: float = 1e-9) -> IntervalValue:
    """Enclose h_c(x) via the integral definition; width <= abs_tol.

    Raises :class:`DivergentIntegralError` at the divergent point (c=-1, x=0)
    and :class:`QuadratureError` if refinement cannot reach the tolerance.
    """
    c, x = Fraction(c), Fraction(x)
    if c < -1:
        raise ValueError("shift must be >= -1")
    if x < 0:
        raise ValueError("argument must be >= 0")
    if abs_tol <= 0:
        raise ValueError("tolerance must be positive")
    e1, e2 = _exponent_pair(c, x)
    if e2 <= -1:
        raise DivergentIntegralError(f"h_{c}({x}) diverges")
    if e1 == e2:
        half = abs_tol / 2
        return IntervalValue(mpmath.mpf(-half), mpmath.mpf(half), 53)

    emin = min(e1, e2)
    prec = max(96, int(-mpmath.log(abs_tol, 2)) * 3 + 96)
    with mpmath.workprec(prec):
        a1 = mpmath.mpf(e1.numerator) / e1.denominator
        a2 = mpmath.mpf(e2.numerator) / e2.denominator
        if emin < 0:
            beta = mpmath.mpf(1) / (1 + mpmath.mpf(emin.numerator) / emin.denominator)
            p1 = beta * (a1 + 1) - 1  # >= 0 after substitution
            p2 = beta * (a2 + 1) - 1

            def integrand(s):
                if s <= 0:
                    return mpmath.mpf(0)
                num = s**p1 - s**p2
                den = 1 - s**beta
                if den == 0:
                    return beta * (a2 - a1)
                return beta * num / den
        else:

            def integrand(t):
                if t <= 0:
                    return mpmath.mpf(0) if e1 > 0 else mpmath.mpf(1)
                den = 1 - t
                if den == 0:
                    return a2 - a1
                return (t**a1 - t**a2) / den

        tol = mpmath.mpf(abs_tol) / 8
        value, err_est = _adaptive(integrand, tol, prec)
        # the discrepancy sum is an estimate; widen it before certifying
        err = 6 * err_est + mpmath.mpf(abs_tol) / 4
        if 2 * err > abs_tol:
            raise QuadratureError("tolerance not reached")
        return IntervalValue(value - err, value + err, prec)
