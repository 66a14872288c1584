"""Brute-force companions to the closed-form evaluators.

Nothing here touches a closed form.  Finite sums are added up term by term in
exact rational arithmetic; infinite sums are bracketed by an exact partial
sum plus a certified geometric tail bound; the telescoping identities the
closed forms rest on are checkable against arbitrary rational tables.  The
summation is deliberately naive — no acceleration — so that agreement with
the closed forms is meaningful evidence.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, NamedTuple, Union

from . import errors
from .core import _growth_dominance_index, _u_pair
from .errors import IterationCapError, RangeError, WindowUnderflowError
from .exact import Rat, qf_from_rat, qf_pow, qf_sign
from .families import (
    _STRIDE2,
    SumSpec,
    _den_pair,
    is_finite_family,
    lhs_term,
    lhs_term_count,
    validate,
)

_ITERATION_CAP = 100_000


def _sum_exact(terms) -> Rat:
    # Accumulate num/den without per-step reduction; one gcd at the end.
    num, den = 0, 1
    for t in terms:
        num = num * t.denominator + t.numerator * den
        den *= t.denominator
    return Fraction(num, den)


def direct_finite(spec: SumSpec) -> Rat:
    """Term-by-term exact value of a finite family's defining sum."""
    if not is_finite_family(spec.family):
        raise errors.SpecValidationError(errors.BAD_PARAMETER, f"{spec.family.value} is not finite")
    vspec = validate(spec)
    count = lhs_term_count(vspec)
    return _sum_exact(lhs_term(vspec, i) for i in range(1, count + 1))


class InfiniteSumResult(NamedTuple):
    partial: Rat
    tail_bound: Rat
    terms_used: int


def _ratio_upper_bound(spec: SumSpec) -> Fraction:
    """Rational r < 1 with |beta/alpha|**h <= r for the per-term index step h."""
    params = spec.params
    h = 2 * spec.m if spec.family in _STRIDE2 else spec.m
    square = qf_pow(params.beta, 2 * h) * qf_pow(params.alpha, -2 * h)  # (beta/alpha)**2h
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(80):
        mid = (lo + hi) / 2
        if qf_sign(qf_from_rat(mid * mid, params.disc) - square) >= 0:
            hi = mid
        else:
            lo = mid
    if hi >= 1:
        raise IterationCapError("term ratio bound indistinguishable from 1")
    return hi


def direct_infinite(spec: SumSpec, tol: Rat) -> InfiniteSumResult:
    """Exact partial sum of an infinite family with a rigorous tail bound.

    Terms are summed until ``tail_bound = |t_M| * r / (1 - r) <= tol``, where
    ``r`` is an exact rational upper bound on every remaining term ratio.
    The bound is certified two ways: the stopping index is past the point
    where the subdominant root's contribution to every denominator is below
    the margin baked into ``r``, and the last two computed terms must already
    exhibit a ratio at most ``r``.  The returned triple therefore satisfies
    ``|true value - partial| <= tail_bound``.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if is_finite_family(spec.family):
        raise errors.SpecValidationError(errors.BAD_PARAMETER, f"{spec.family.value} is not infinite")
    vspec = validate(spec)
    params = vspec.params

    rho = _ratio_upper_bound(vspec)
    eps = (1 - rho) / 8
    while True:
        r = rho * ((1 + eps) / (1 - eps)) ** 2
        if r < 1:
            break
        eps /= 2
    dominance = _growth_dominance_index(params, factor=1 / (eps * eps))

    # First term whose denominator indices both sit past the dominance index.
    settle = 1
    while min(_den_pair(vspec, settle)) < dominance:
        settle += 1

    num, den = 0, 1
    prev_abs = None
    i = 0
    tail = None
    while i < _ITERATION_CAP:
        i += 1
        t = lhs_term(vspec, i)
        num = num * t.denominator + t.numerator * den
        den *= t.denominator
        t_abs = abs(t)
        if i >= settle and prev_abs is not None and t_abs <= prev_abs * r:
            tail = t_abs * r / (1 - r)
            if tail <= tol:
                return InfiniteSumResult(Fraction(num, den), tail, i)
        prev_abs = t_abs
    raise IterationCapError(
        f"no tail bound <= {tol} within {_ITERATION_CAP} terms", achieved=tail
    )


_Table = Union[Mapping[int, Rat], Callable[[int], Rat]]


def _table_get(f: _Table, i: int) -> Rat:
    try:
        value = f[i] if isinstance(f, Mapping) else f(i)
    except KeyError as exc:
        raise WindowUnderflowError(f"table has no entry for index {i}") from exc
    return Fraction(value)


def telescope_check(f: _Table, N: int, t: int, alternating: bool = False) -> Rat:
    """Residual of the shift-exchange summation identity on an arbitrary table.

    Plain form (window 1..N+t):

        sum_{i=1}^{N} (f(i+t) - f(i))  -  sum_{i=1}^{t} (f(i+N) - f(i))

    Alternating form (window 1..2N+2t):

        sum_{i=1}^{2N} (-1)**i (f(i+2t) - f(i))
            - sum_{i=1}^{2t} (-1)**i (f(i+2N) - f(i))

    Both are identically zero for every table; the nonzero residual of a
    buggy table generator is the point of exposing this.
    """
    if N < 0 or t < 0:
        raise ValueError("N and t must be >= 0")
    if alternating:
        lhs = sum(
            (-1) ** i * (_table_get(f, i + 2 * t) - _table_get(f, i))
            for i in range(1, 2 * N + 1)
        )
        rhs = sum(
            (-1) ** i * (_table_get(f, i + 2 * N) - _table_get(f, i))
            for i in range(1, 2 * t + 1)
        )
    else:
        lhs = sum(_table_get(f, i + t) - _table_get(f, i) for i in range(1, N + 1))
        rhs = sum(_table_get(f, i + N) - _table_get(f, i) for i in range(1, t + 1))
    return Fraction(lhs - rhs)


_GOOD_DIRECT_MAX = 20  # keeps the largest term index at 2**20


def good_direct(N: int) -> Rat:
    """Exact value of ``sum_{i=0}^{N} 1 / F_{2**i}`` by direct summation."""
    if not 1 <= N <= _GOOD_DIRECT_MAX:
        raise RangeError(f"N must be in [1, {_GOOD_DIRECT_MAX}], got {N}")
    one, minus_one = Fraction(1), Fraction(-1)
    return _sum_exact(1 / _u_pair(one, minus_one, 1 << i)[0] for i in range(N + 1))
