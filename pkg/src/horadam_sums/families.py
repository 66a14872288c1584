"""Closed-form evaluators for the reciprocal-sum families.

Every family is a parameterized sum of the shape

    sum_i  sign(i) * q**wexp(i) / (seq(i1(i)) * seq(i2(i)))

over a Horadam sequence ``w`` (or its companions ``u``, ``v``), together with
a closed form: a short combination of term ratios scaled by a prefactor such
as ``1/(e_w * u_n * u_{2km})``.  Finite families evaluate to exact rationals;
infinite families evaluate to exact quadratic-field values whose irrational
part, when present, is a multiple of a power of the dominant root.

``validate`` screens a spec before evaluation: structural parameter checks,
admissibility of the alternating variants, convergence conditions for the
infinite families, prefactor nonvanishing, and a scan proving every
denominator term in the identity is nonzero (a growth-dominance horizon
covers the infinite tails).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import errors
from .core import (
    HoradamParams,
    SeqKind,
    _u_pair,
    lucas_u,
    lucas_v,
    nonvanishing_horizon,
    term,
)
from .errors import RangeError, SpecValidationError
from .exact import QF, Rat, qf_from_rat, qf_pow


class FamilyId(enum.Enum):
    """Catalog of sum families.

    ``*_FIN`` tags are finite sums over ``i = 1..N`` (``T8_SIGNED`` runs to
    ``2N``); ``*_INF``/``*_ALT`` tags are their convergent infinite
    companions, the ``_ALT`` ones carrying a built-in ``(-1)**i`` term sign.
    ``T1_EQ`` and ``T2_EQ`` evaluate the same sums as ``T1_FIN``/``T2_FIN``
    through the rearranged product form.
    """

    T1_FIN = "T1_FIN"
    T1_EQ = "T1_EQ"
    C1_FIN = "C1_FIN"
    C2_INF = "C2_INF"
    T2_FIN = "T2_FIN"
    T2_EQ = "T2_EQ"
    C3_INF = "C3_INF"
    T3V_FIN = "T3V_FIN"
    T3U_FIN = "T3U_FIN"
    T5_FIN = "T5_FIN"
    T5_INF = "T5_INF"
    T8_SIGNED = "T8_SIGNED"
    C8_INF = "C8_INF"
    T9_FIN = "T9_FIN"
    C9_INF = "C9_INF"
    C9_INF_ALT = "C9_INF_ALT"
    T11_FIN = "T11_FIN"
    T11_INF = "T11_INF"
    T11_INF_ALT = "T11_INF_ALT"


F = FamilyId

#: Canonical family behind each alias (identical sum, rearranged closed form).
_CANONICAL = {F.T1_EQ: F.T1_FIN, F.T2_EQ: F.T2_FIN}

FINITE_FAMILIES = (
    F.T1_FIN, F.T1_EQ, F.C1_FIN, F.T2_FIN, F.T2_EQ,
    F.T3V_FIN, F.T3U_FIN, F.T5_FIN, F.T8_SIGNED, F.T9_FIN, F.T11_FIN,
)
INFINITE_FAMILIES = (
    F.C2_INF, F.C3_INF, F.T5_INF, F.C8_INF, F.C9_INF, F.C9_INF_ALT,
    F.T11_INF, F.T11_INF_ALT,
)
ALL_FAMILIES = FINITE_FAMILIES + INFINITE_FAMILIES

#: Families whose summand and closed form involve the index offset n.
_USES_N = {F.T1_FIN, F.T1_EQ, F.C2_INF, F.T8_SIGNED, F.C8_INF, F.T9_FIN, F.C9_INF, F.C9_INF_ALT}
#: Finite families honoring the user-selected term sign.
_SIGNED = {F.T8_SIGNED, F.T9_FIN, F.T11_FIN}
#: Infinite families with the alternating term sign built in.
_BUILTIN_ALT = {F.C8_INF, F.C9_INF_ALT, F.T11_INF_ALT}
#: Families stepping the summand index by 2m per term instead of m.
_STRIDE2 = {F.T9_FIN, F.C9_INF, F.C9_INF_ALT, F.T11_FIN, F.T11_INF, F.T11_INF_ALT}
#: Families whose prefactor divides by e_w (the u/v families never do).
_USES_EW = set(ALL_FAMILIES) - {F.T3V_FIN, F.T3U_FIN}
#: Alternating variants that require extra index parity to be identities.
_PARITY_FINITE = {F.T9_FIN, F.T11_FIN}
_PARITY_INFINITE = {F.C9_INF_ALT, F.T11_INF_ALT}


def is_finite_family(family: FamilyId) -> bool:
    return family in FINITE_FAMILIES


@dataclass(frozen=True)
class SumSpec:
    """One sum to evaluate: family tag plus integer parameters.

    ``n`` is ignored by families that do not use it; ``N`` must be given for
    finite families and omitted for infinite ones; ``sign`` is honored only
    by the signed finite families.  ``screened`` and ``horizon`` are filled
    in by :func:`validate`.
    """

    params: HoradamParams
    family: FamilyId
    m: int
    k: int
    n: int = 0
    N: int | None = None
    sign: int = 1
    screened: tuple[int, ...] | None = field(default=None, compare=False)
    horizon: int | None = field(default=None, compare=False)

    @property
    def kind(self) -> SeqKind:
        if self.family is F.T3U_FIN:
            return SeqKind.U
        if self.family is F.T3V_FIN:
            return SeqKind.V
        return self.params.kind


@dataclass(frozen=True)
class SumValue:
    """Evaluation result: exact value plus an echo of what was evaluated."""

    exact: QF
    family: FamilyId
    spec: SumSpec

    def as_rat(self) -> Rat:
        if self.exact.y != 0:
            raise ValueError("value has an irrational part")
        return self.exact.x


# ---------------------------------------------------------------------------
# Summand geometry (shared by the evaluators and the brute-force oracle)
# ---------------------------------------------------------------------------


def _seq_at(spec: SumSpec, idx: int) -> Rat:
    if spec.family is F.T3U_FIN:
        return lucas_u(spec.params.p, spec.params.q, idx)
    if spec.family is F.T3V_FIN:
        return lucas_v(spec.params.p, spec.params.q, idx)
    return term(spec.params, idx)


def _den_pair(spec: SumSpec, i: int) -> tuple[int, int]:
    """Denominator indices of the i-th summand (1-based)."""
    m, k, n = spec.m, spec.k, spec.n
    fam = _CANONICAL.get(spec.family, spec.family)
    if fam in (F.T1_FIN, F.T8_SIGNED, F.C2_INF, F.C8_INF):
        return m * (i - k) + n, m * (i + k) + n
    if fam in (F.T2_FIN, F.C3_INF, F.T3V_FIN):
        return m * (i - k), m * (i + k)
    if fam in (F.C1_FIN, F.T5_FIN, F.T5_INF, F.T3U_FIN):
        return m * i, m * (i + 2 * k)
    if fam in (F.T9_FIN, F.C9_INF, F.C9_INF_ALT):
        return m * (2 * i - k) + n, m * (2 * i + k) + n
    if fam in (F.T11_FIN, F.T11_INF, F.T11_INF_ALT):
        return m * (2 * i - k), m * (2 * i + k)
    raise AssertionError(fam)


def _weight_exp(spec: SumSpec, i: int) -> int:
    """Exponent of q in the i-th summand weight."""
    m, k = spec.m, spec.k
    fam = _CANONICAL.get(spec.family, spec.family)
    if fam in (F.T5_FIN, F.T5_INF, F.T3U_FIN):
        return m * i
    if fam in _STRIDE2:
        return m * (2 * i - k)
    return m * (i - k)


def _term_sign(spec: SumSpec, i: int) -> int:
    if spec.family in _SIGNED:
        return 1 if spec.sign > 0 or i % 2 == 0 else -1
    if spec.family in _BUILTIN_ALT:
        return 1 if i % 2 == 0 else -1
    return 1


def lhs_term(spec: SumSpec, i: int) -> Rat:
    """Value of the i-th summand of the family's defining sum."""
    i1, i2 = _den_pair(spec, i)
    weight = spec.params.q ** _weight_exp(spec, i)
    return _term_sign(spec, i) * weight / (_seq_at(spec, i1) * _seq_at(spec, i2))


def lhs_term_count(spec: SumSpec) -> int:
    """Number of terms in a finite family's defining sum."""
    if spec.N is None:
        raise ValueError("term count undefined for an infinite family")
    return 2 * spec.N if spec.family is F.T8_SIGNED else spec.N


def _screen_index(spec: SumSpec, j: int) -> int:
    """j-th entry of the arithmetic progression covering all denominators."""
    m, k, n = spec.m, spec.k, spec.n
    fam = _CANONICAL.get(spec.family, spec.family)
    if fam in (F.T1_FIN, F.T8_SIGNED, F.C2_INF, F.C8_INF):
        return m * (j - k) + n
    if fam in (F.T2_FIN, F.C3_INF, F.T3V_FIN):
        return m * (j - k)
    if fam in (F.C1_FIN, F.T5_FIN, F.T5_INF, F.T3U_FIN):
        return m * j
    if fam in (F.T9_FIN, F.C9_INF, F.C9_INF_ALT):
        return m * (2 * j - k) + n
    return m * (2 * j - k)


def _screen_count(spec: SumSpec) -> int:
    """Progression length covering both sides of a finite identity."""
    k, N = spec.k, spec.N
    fam = _CANONICAL.get(spec.family, spec.family)
    if fam is F.T8_SIGNED:
        return 2 * N + 2 * k
    if fam in _STRIDE2:
        return N + k
    return N + 2 * k


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _require(cond: bool, kind: str, message: str, index: int | None = None) -> None:
    if not cond:
        raise SpecValidationError(kind, message, index=index)


def _u(spec: SumSpec, idx: int) -> Rat:
    return lucas_u(spec.params.p, spec.params.q, idx)


def validate(spec: SumSpec) -> SumSpec:
    """Check a spec against every precondition of its family's identity.

    Returns the spec annotated with the screened denominator index set (and,
    for infinite families, the horizon index beyond which terms are certified
    nonzero).  Raises :class:`SpecValidationError` with a taxonomy kind
    otherwise.  Checks run cheapest-first: structural, parity, convergence,
    prefactors, denominator scan.
    """
    fam = spec.family
    finite = is_finite_family(fam)
    p = spec.params

    # Structural checks.
    _require(spec.k >= 1, errors.BAD_PARAMETER, "k must be >= 1")
    _require(spec.sign in (1, -1), errors.BAD_PARAMETER, f"sign must be +1 or -1, got {spec.sign}")
    if spec.sign == -1:
        _require(fam in _SIGNED, errors.BAD_PARAMETER, f"{fam.value} does not take a sign")
    if finite:
        _require(spec.m != 0, errors.BAD_PARAMETER, "m must be nonzero")
        _require(spec.N is not None, errors.BAD_PARAMETER, "N is required for a finite family")
        _require(spec.N >= 0, errors.BAD_PARAMETER, "N must be >= 0")
    else:
        _require(spec.N is None, errors.BAD_PARAMETER, "N is not accepted for an infinite family")

    # Alternating variants are identities only under extra index parity.
    if fam in _PARITY_FINITE and spec.sign == -1:
        ok = spec.N == 0 or spec.N == spec.k or (spec.k % 2 == 0 and spec.N % 2 == 0)
        _require(ok, errors.SIGN_PARITY,
                 f"alternating {fam.value} needs N in {{0, k}} or k and N both even")
    if fam in _PARITY_INFINITE:
        _require(spec.k % 2 == 0, errors.SIGN_PARITY,
                 f"alternating {fam.value} needs k even")

    # Convergence admissibility for infinite families.
    if not finite:
        _require(spec.m >= 1, errors.DIVERGENT_SPEC, "infinite family needs m >= 1")
        _require(p.disc > 0, errors.DIVERGENT_SPEC, f"infinite family needs disc > 0, got {p.disc}")
        _require(p.p > 0, errors.DIVERGENT_SPEC, f"infinite family needs p > 0, got {p.p}")

    # Prefactor denominators.
    if fam in _USES_EW:
        _require(p.e_w != 0, errors.EW_ZERO, "e_w = 0 (degenerate geometric sequence)")
    if fam in _USES_N:
        _require(_u(spec, spec.n) != 0, errors.UN_ZERO, f"u_{{{spec.n}}} = 0")
    if fam is F.C1_FIN:
        _require(_u(spec, spec.m * spec.k) != 0, errors.UN_ZERO, f"u_{{{spec.m * spec.k}}} = 0")
    _require(_u(spec, 2 * spec.k * spec.m) != 0, errors.U2KM_ZERO,
             f"u_{{{2 * spec.k * spec.m}}} = 0")

    # Denominator scan.
    if finite:
        screened = []
        for j in range(1, _screen_count(spec) + 1):
            idx = _screen_index(spec, j)
            value = _seq_at(spec, idx)
            _require(value != 0, errors.ZERO_DENOMINATOR, "denominator term is zero", index=idx)
            screened.append(idx)
        return replace(spec, screened=tuple(screened), horizon=None)

    horizon = nonvanishing_horizon(p)
    screened = []
    j = 1
    while True:
        idx = _screen_index(spec, j)
        if idx >= horizon:
            break
        value = _seq_at(spec, idx)
        _require(value != 0, errors.ZERO_DENOMINATOR, "denominator term is zero", index=idx)
        screened.append(idx)
        j += 1
    return replace(spec, screened=tuple(screened), horizon=horizon)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def _w(spec: SumSpec, idx: int) -> Rat:
    return term(spec.params, idx)


def _closed_finite_expr(spec: SumSpec) -> Rat:
    """Right side of the family's primary identity, as printed."""
    p_set, m, k, n, N, s = spec.params, spec.m, spec.k, spec.n, spec.N, spec.sign
    e, q = p_set.e_w, p_set.q
    u2km = _u(spec, 2 * k * m)
    fam = spec.family
    w = lambda i: _w(spec, i)

    if fam in (F.T1_EQ, F.T2_EQ):
        return _equiv_finite_expr(spec)
    if fam is F.T1_FIN:
        total = sum(
            w(m * (i - k)) / w(m * (i - k) + n) - w(m * (i + N - k)) / w(m * (i + N - k) + n)
            for i in range(1, 2 * k + 1)
        )
        return total / (e * _u(spec, n) * u2km)
    if fam is F.C1_FIN:
        total = sum(
            w(m * (i - k)) / w(m * i) - w(m * (i + N - k)) / w(m * (i + N))
            for i in range(1, 2 * k + 1)
        )
        return total / (e * _u(spec, m * k) * u2km)
    if fam is F.T2_FIN:
        total = sum(
            w(m * (i + N - k) + 1) / w(m * (i + N - k)) - w(m * (i - k) + 1) / w(m * (i - k))
            for i in range(1, 2 * k + 1)
        )
        return total / (e * u2km)
    if fam is F.T3V_FIN:
        u_ = lambda i: lucas_u(p_set.p, q, i)
        v_ = lambda i: lucas_v(p_set.p, q, i)
        total = sum(
            u_(m * (i + N - k)) / v_(m * (i + N - k)) - u_(m * (i - k)) / v_(m * (i - k))
            for i in range(1, 2 * k + 1)
        )
        return total / (2 * u2km)
    if fam is F.T3U_FIN:
        u_ = lambda i: lucas_u(p_set.p, q, i)
        v_ = lambda i: lucas_v(p_set.p, q, i)
        total = sum(
            v_(m * i) / u_(m * i) - v_(m * (i + N)) / u_(m * (i + N))
            for i in range(1, 2 * k + 1)
        )
        return total / (2 * u2km)
    if fam is F.T5_FIN:
        total = sum(
            w(m * (i + N) + 1) / w(m * (i + N)) - w(m * i + 1) / w(m * i)
            for i in range(1, 2 * k + 1)
        )
        return total / (e * u2km)
    if fam is F.T8_SIGNED:
        total = sum(
            Fraction(s) ** i
            * (w(m * (i - k)) / w(m * (i - k) + n)
               - w(m * (i + 2 * N - k)) / w(m * (i + 2 * N - k) + n))
            for i in range(1, 2 * k + 1)
        )
        return total / (e * _u(spec, n) * u2km)
    if fam is F.T9_FIN:
        total = sum(
            Fraction(s) ** i
            * (w(m * (2 * i - k)) / w(m * (2 * i - k) + n)
               - w(m * (2 * (i + N) - k)) / w(m * (2 * (i + N) - k) + n))
            for i in range(1, k + 1)
        )
        return total / (e * _u(spec, n) * u2km)
    if fam is F.T11_FIN:
        total = sum(
            Fraction(s) ** i
            * (w(m * (2 * (i + N) - k) + 1) / w(m * (2 * (i + N) - k))
               - w(m * (2 * i - k) + 1) / w(m * (2 * i - k)))
            for i in range(1, k + 1)
        )
        return total / (e * u2km)
    raise ValueError(f"{fam.value} is not a finite family")


def _equiv_finite_expr(spec: SumSpec) -> Rat:
    """Rearranged product form, normalized to the primary sum's weights."""
    m, k, N = spec.m, spec.k, spec.N
    fam = _CANONICAL.get(spec.family, spec.family)
    stride2 = fam in _STRIDE2
    far = 2 * m * N if (stride2 or fam is F.T8_SIGNED) else m * N
    count = k if stride2 else 2 * k
    q = spec.params.q
    total = Fraction(0)
    for i in range(1, count + 1):
        base, _ = _den_pair(spec, i)
        weight = q ** _weight_exp(spec, i)
        total += _term_sign(spec, i) * weight / (_seq_at(spec, base) * _seq_at(spec, base + far))
    return _u(spec, far) / _u(spec, 2 * k * m) * total


def _closed_infinite_expr(spec: SumSpec) -> QF:
    """Exact value of an infinite family's closed form.

    Assumes denominators are nonzero; does not itself re-check admissibility,
    so the printed-form fixtures can evaluate the expression even where the
    identity's preconditions fail.
    """
    p_set, m, k, n = spec.params, spec.m, spec.k, spec.n
    e, q, disc = p_set.e_w, p_set.q, p_set.disc
    u2km = _u(spec, 2 * k * m)
    alpha = p_set.alpha
    w = lambda i: _w(spec, i)
    fam = spec.family

    if fam is F.C2_INF:
        pref = 1 / (e * _u(spec, n) * u2km)
        ratios = sum(w(m * (i - k)) / w(m * (i - k) + n) for i in range(1, 2 * k + 1))
        return qf_from_rat(pref * ratios, disc) - qf_pow(alpha, -n) * qf_from_rat(pref * 2 * k, disc)
    if fam is F.C3_INF:
        pref = 1 / (e * u2km)
        ratios = sum(w(m * (i - k) + 1) / w(m * (i - k)) for i in range(1, 2 * k + 1))
        return alpha * qf_from_rat(pref * 2 * k, disc) - qf_from_rat(pref * ratios, disc)
    if fam is F.T5_INF:
        pref = 1 / (e * u2km)
        ratios = sum(w(m * i + 1) / w(m * i) for i in range(1, 2 * k + 1))
        return alpha * qf_from_rat(pref * 2 * k, disc) - qf_from_rat(pref * ratios, disc)
    if fam is F.C8_INF:
        pref = 1 / (e * _u(spec, n) * u2km)
        ratios = sum(
            Fraction(-1) ** i * w(m * (i - k)) / w(m * (i - k) + n) for i in range(1, 2 * k + 1)
        )
        return qf_from_rat(pref * ratios, disc)
    if fam is F.C9_INF:
        pref = 1 / (e * _u(spec, n) * u2km)
        ratios = sum(w(m * (2 * i - k)) / w(m * (2 * i - k) + n) for i in range(1, k + 1))
        return qf_from_rat(pref * ratios, disc) - qf_pow(alpha, -n) * qf_from_rat(pref * k, disc)
    if fam is F.C9_INF_ALT:
        pref = 1 / (e * _u(spec, n) * u2km)
        ratios = sum(
            Fraction(-1) ** i * w(m * (2 * i - k)) / w(m * (2 * i - k) + n)
            for i in range(1, k + 1)
        )
        return qf_from_rat(pref * ratios, disc)
    if fam is F.T11_INF:
        pref = 1 / (e * u2km)
        ratios = sum(w(m * (2 * i - k) + 1) / w(m * (2 * i - k)) for i in range(1, k + 1))
        return alpha * qf_from_rat(pref * k, disc) - qf_from_rat(pref * ratios, disc)
    if fam is F.T11_INF_ALT:
        pref = 1 / (e * u2km)
        ratios = sum(
            Fraction(-1) ** (i - 1) * w(m * (2 * i - k) + 1) / w(m * (2 * i - k))
            for i in range(1, k + 1)
        )
        return qf_from_rat(pref * ratios, disc)
    raise ValueError(f"{fam.value} is not an infinite family")


# ---------------------------------------------------------------------------
# Public evaluators
# ---------------------------------------------------------------------------


def eval_finite_closed(spec: SumSpec) -> SumValue:
    """Evaluate a finite family through its closed form (exact rational)."""
    if not is_finite_family(spec.family):
        raise SpecValidationError(errors.BAD_PARAMETER, f"{spec.family.value} is not finite")
    vspec = validate(spec)
    value = _closed_finite_expr(vspec)
    return SumValue(qf_from_rat(value, spec.params.disc), spec.family, vspec)


def eval_finite_equivalent(spec: SumSpec) -> SumValue:
    """Evaluate a finite family through its rearranged product form.

    Both displays of an identity weight the summand differently; the result
    here is normalized to the primary display's left side, so it is directly
    comparable with :func:`eval_finite_closed`.
    """
    if not is_finite_family(spec.family):
        raise SpecValidationError(errors.BAD_PARAMETER, f"{spec.family.value} is not finite")
    vspec = validate(spec)
    value = _equiv_finite_expr(vspec)
    return SumValue(qf_from_rat(value, spec.params.disc), spec.family, vspec)


def eval_infinite_closed(spec: SumSpec) -> SumValue:
    """Evaluate an infinite family's exact closed value in Q(sqrt(disc))."""
    if is_finite_family(spec.family):
        raise SpecValidationError(errors.BAD_PARAMETER, f"{spec.family.value} is not infinite")
    vspec = validate(spec)
    return SumValue(_closed_infinite_expr(vspec), spec.family, vspec)


# ---------------------------------------------------------------------------
# Companion relations between the u/v closed forms
# ---------------------------------------------------------------------------


def _screen_uv(p, q, indices, seq) -> None:
    fn = lucas_v if seq == "v" else lucas_u
    for idx in indices:
        if fn(p, q, idx) == 0:
            raise SpecValidationError(errors.ZERO_DENOMINATOR, "denominator term is zero", index=idx)


def byproduct_relation_residual(which: int, params: HoradamParams, m: int, k: int, N: int) -> Rat:
    """Residual of one of the two cross-family ratio relations; always zero.

    Relation 1 ties the u/v ratio differences to the shifted v ratios scaled
    by ``2/disc``; relation 2 ties the v/u ratio differences to shifted u
    ratios scaled by ``2*q**(mk)/u_{mk}``.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    if m == 0 or k < 1 or N < 0:
        raise SpecValidationError(errors.BAD_PARAMETER, "need m != 0, k >= 1, N >= 0")
    p, q = params.p, params.q
    u_ = lambda i: lucas_u(p, q, i)
    v_ = lambda i: lucas_v(p, q, i)
    rng = range(1, 2 * k + 1)
    if which == 1:
        _screen_uv(p, q, [m * (i - k) for i in rng] + [m * (i + N - k) for i in rng], "v")
        lhs = sum(u_(m * (i + N - k)) / v_(m * (i + N - k)) - u_(m * (i - k)) / v_(m * (i - k)) for i in rng)
        rhs = 2 / params.disc * sum(
            v_(m * (i + N - k) + 1) / v_(m * (i + N - k)) - v_(m * (i - k) + 1) / v_(m * (i - k))
            for i in rng
        )
        return lhs - rhs
    if u_(m * k) == 0:
        raise SpecValidationError(errors.UN_ZERO, f"u_{{{m * k}}} = 0")
    _screen_uv(p, q, [m * i for i in rng] + [m * (i + N) for i in rng], "u")
    lhs = sum(v_(m * i) / u_(m * i) - v_(m * (i + N)) / u_(m * (i + N)) for i in rng)
    rhs = 2 * q ** (m * k) / u_(m * k) * sum(
        u_(m * (i + N - k)) / u_(m * (i + N)) - u_(m * (i - k)) / u_(m * i) for i in rng
    )
    return lhs - rhs


def _byproduct2_shifted_numerator_residual(params: HoradamParams, m: int, k: int, N: int) -> Rat:
    """Relation-2 residual with the right side's first numerator index shifted
    by one (``u_{m(i+N-k)+1}``).  Nonzero in general; kept for documentation
    of why the unshifted numerator is the correct reading.
    """
    p, q = params.p, params.q
    u_ = lambda i: lucas_u(p, q, i)
    v_ = lambda i: lucas_v(p, q, i)
    rng = range(1, 2 * k + 1)
    _screen_uv(p, q, [m * i for i in rng] + [m * (i + N) for i in rng] + [m * k], "u")
    lhs = sum(v_(m * i) / u_(m * i) - v_(m * (i + N)) / u_(m * (i + N)) for i in rng)
    rhs = 2 * q ** (m * k) / u_(m * k) * sum(
        u_(m * (i + N - k) + 1) / u_(m * (i + N)) - u_(m * (i - k)) / u_(m * i) for i in rng
    )
    return lhs - rhs


# ---------------------------------------------------------------------------
# Classic fixed sums
# ---------------------------------------------------------------------------

_GOOD_MAX = 62  # keeps the index 2**N inside the signed 64-bit domain


def classic_good(N: int) -> Rat:
    """Closed value ``3 - F_{2**N - 1} / F_{2**N}`` of the doubling reciprocal sum."""
    if not 0 <= N <= _GOOD_MAX:
        raise RangeError(f"N must be in [0, {_GOOD_MAX}], got {N}")
    f_prev, f_n = _u_pair(Fraction(1), Fraction(-1), (1 << N) - 1)
    return 3 - f_prev / f_n


def classic_miller() -> QF:
    """Exact value ``7/2 - (1/2)*sqrt(5)`` of the infinite doubling reciprocal sum."""
    return QF(Fraction(7, 2), Fraction(-1, 2), Fraction(5))
