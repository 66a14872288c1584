"""Horadam sequence instances and the identities every evaluator relies on.

A sequence is pinned down by rationals ``(a, b, p, q)`` through

    w_0 = a,  w_1 = b,  w_n = p*w_{n-1} - q*w_{n-2},

with the companion sequences ``u`` (seeds 0, 1) and ``v`` (seeds 2, p).
Terms are exact rationals for any signed 64-bit index; nonnegative indices
use fast doubling on ``u`` pairs, negative indices use the exact reflection
formulas, so the cost is O(log |n|) big-number multiplications either way.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import ParamsError, PreconditionError, ZERO_DISCRIMINANT, ZERO_Q
from .exact import QF, Rat, qf_from_rat, qf_pow, qf_sign

_INDEX_LIMIT = 1 << 63  # indices are contractually 64-bit signed


def _check_index(n: int) -> int:
    n = int(n)
    if not -_INDEX_LIMIT <= n < _INDEX_LIMIT:
        raise ValueError(f"index {n} outside the signed 64-bit range")
    return n


class SeqKind(enum.Enum):
    """Which classical family a parameter set belongs to."""

    W = "W"  # general seeds
    U = "U"  # seeds (0, 1)
    V = "V"  # seeds (2, p)


@dataclass(frozen=True)
class HoradamParams:
    """Validated parameters with every derived constant precomputed.

    Derived fields: ``disc = p**2 - 4q`` (nonzero), the characteristic roots
    ``alpha = (p + sqrt(disc))/2`` and ``beta = (p - sqrt(disc))/2`` as exact
    quadratic-field values, the Binet coefficients ``binet_a = b - a*beta``
    and ``binet_b = b - a*alpha``, and the characteristic constant
    ``e_w = p*a*b - q*a**2 - b**2 = -binet_a*binet_b``.
    """

    a: Rat
    b: Rat
    p: Rat
    q: Rat
    disc: Rat = field(init=False, compare=False)
    e_w: Rat = field(init=False, compare=False)
    alpha: QF = field(init=False, compare=False)
    beta: QF = field(init=False, compare=False)
    binet_a: QF = field(init=False, compare=False)
    binet_b: QF = field(init=False, compare=False)

    def __post_init__(self):
        for name in ("a", "b", "p", "q"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        disc = self.p * self.p - 4 * self.q
        if disc == 0:
            raise ParamsError(ZERO_DISCRIMINANT, f"p**2 - 4q = 0 for p={self.p}, q={self.q}")
        if self.q == 0:
            raise ParamsError(ZERO_Q, "q must be nonzero")
        object.__setattr__(self, "disc", disc)
        half = Fraction(1, 2)
        alpha = QF(self.p * half, half, disc)
        beta = QF(self.p * half, -half, disc)
        binet_a = qf_from_rat(self.b, disc) - qf_from_rat(self.a, disc) * beta
        binet_b = qf_from_rat(self.b, disc) - qf_from_rat(self.a, disc) * alpha
        e_w = self.p * self.a * self.b - self.q * self.a * self.a - self.b * self.b
        product = -(binet_a * binet_b)
        assert product.y == 0 and product.x == e_w, "characteristic constant mismatch"
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "binet_a", binet_a)
        object.__setattr__(self, "binet_b", binet_b)
        object.__setattr__(self, "e_w", e_w)

    @property
    def kind(self) -> SeqKind:
        if (self.a, self.b) == (0, 1):
            return SeqKind.U
        if self.a == 2 and self.b == self.p:
            return SeqKind.V
        return SeqKind.W

    def __hash__(self):
        return hash((self.a, self.b, self.p, self.q))


def params_new(a, b, p, q) -> HoradamParams:
    """Validate ``(a, b, p, q)`` and precompute the derived constants."""
    return HoradamParams(a, b, p, q)


@lru_cache(maxsize=None)
def _u_pair(p: Rat, q: Rat, n: int) -> tuple[Rat, Rat]:
    """(u_n, u_{n+1}) for n >= 0 by fast doubling."""
    if n == 0:
        return Fraction(0), Fraction(1)
    lo, hi = _u_pair(p, q, n >> 1)
    even = lo * (2 * hi - p * lo)  # u_{2j}
    odd = hi * hi - q * lo * lo    # u_{2j+1}
    if n & 1:
        return odd, p * odd - q * even
    return even, odd


def lucas_u(p, q, n: int) -> Rat:
    """First-kind term ``u_n`` for any signed index; ``u_{-n} = -u_n * q**-n``."""
    p, q = Fraction(p), Fraction(q)
    if q == 0:
        raise ParamsError(ZERO_Q, "q must be nonzero")
    if p * p == 4 * q:
        raise ParamsError(ZERO_DISCRIMINANT, f"p**2 - 4q = 0 for p={p}, q={q}")
    n = _check_index(n)
    if n >= 0:
        return _u_pair(p, q, n)[0]
    return -_u_pair(p, q, -n)[0] * q**n


def lucas_v(p, q, n: int) -> Rat:
    """Second-kind term ``v_n = 2*u_{n+1} - p*u_n``; ``v_{-n} = v_n * q**-n``."""
    p, q = Fraction(p), Fraction(q)
    if q == 0:
        raise ParamsError(ZERO_Q, "q must be nonzero")
    if p * p == 4 * q:
        raise ParamsError(ZERO_DISCRIMINANT, f"p**2 - 4q = 0 for p={p}, q={q}")
    n = _check_index(n)
    if n >= 0:
        lo, hi = _u_pair(p, q, n)
        return 2 * hi - p * lo
    m = -n
    lo, hi = _u_pair(p, q, m)
    return (2 * hi - p * lo) * q**n


@lru_cache(maxsize=None)
def _term_cached(params: HoradamParams, n: int) -> Rat:
    if n >= 0:
        if n == 0:
            return params.a
        u_prev, u_n = _u_pair(params.p, params.q, n - 1)
        # w_n = b*u_n - q*a*u_{n-1}
        return params.b * u_n - params.q * params.a * u_prev
    m = -n
    # w_{-m} = (a*v_m - w_m) / q**m
    return (params.a * lucas_v(params.p, params.q, m) - _term_cached(params, m)) / params.q**m


def term(params: HoradamParams, n: int) -> Rat:
    """Exact ``w_n`` for any signed 64-bit index."""
    return _term_cached(params, _check_index(n))


def identity_4_1_residual(params: HoradamParams, n: int, r: int, s: int) -> Rat:
    """Residual of ``w_n*w_{n+r+s} - w_{n+r}*w_{n+s} - e_w*q**n*u_r*u_s``.

    Identically zero for every parameter set and all signed indices; exposed
    so the property can be exercised directly.
    """
    w = lambda i: term(params, i)
    u = lambda i: lucas_u(params.p, params.q, i)
    return w(n) * w(n + r + s) - w(n + r) * w(n + s) - params.e_w * params.q**n * u(r) * u(s)


_HORIZON_CAP = 100_000


def _growth_dominance_index(params: HoradamParams, factor: Rat = Fraction(1)) -> int:
    """Smallest j >= 0 with ``binet_a**2 * alpha**(2j) > factor * binet_b**2 * beta**(2j)``.

    Once the inequality holds it holds for every larger j, because the left
    side grows by ``alpha**2 >= beta**2`` per step.  Requires disc > 0, p > 0
    (so |alpha| > |beta|) and e_w != 0 (so neither Binet coefficient is zero).
    """
    lhs = params.binet_a * params.binet_a
    rhs = params.binet_b * params.binet_b * qf_from_rat(factor, params.disc)
    alpha_sq = params.alpha * params.alpha
    beta_sq = params.beta * params.beta
    for j in range(_HORIZON_CAP):
        if qf_sign(lhs - rhs) > 0:
            return j
        lhs = lhs * alpha_sq
        rhs = rhs * beta_sq
    raise PreconditionError("growth-dominance", "no dominance index below cap")


@lru_cache(maxsize=None)
def nonvanishing_horizon(params: HoradamParams) -> int:
    """Smallest index bound N0 >= 0 such that ``w_n != 0`` for every n >= N0.

    Requires disc > 0, p > 0 and e_w != 0; under those conditions
    ``|binet_a| * alpha**n`` eventually dominates ``|binet_b| * |beta|**n`` and
    the Binet numerator cannot vanish.  The dominance bound is then refined
    downward by direct term evaluation (never below zero).
    """
    if params.disc <= 0:
        raise PreconditionError("disc > 0", f"disc = {params.disc}")
    if params.p <= 0:
        raise PreconditionError("p > 0", f"p = {params.p}")
    if params.e_w == 0:
        raise PreconditionError("e_w != 0", "degenerate geometric sequence")
    bound = _growth_dominance_index(params)
    while bound > 0 and term(params, bound - 1) != 0:
        bound -= 1
    return bound
