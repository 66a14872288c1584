"""Exact arithmetic: rationals, real quadratic extensions, decimal rendering.

Three value domains live here:

* ``Rat`` — arbitrary-precision rationals, backed by :class:`fractions.Fraction`
  (always canonical: positive denominator, gcd 1).
* ``QF`` — elements ``x + y*sqrt(disc)`` of a quadratic extension of the
  rationals, with exact field arithmetic, exact sign decisions, and exact
  powers.  One ``disc`` per value; values over different radicands do not mix
  unless one side is purely rational.
* ``Decimal`` — faithfully-rounded decimal renderings of either domain, used
  for display only.  Every digit printed is correct to strictly less than one
  unit in the last place.

Everything is immutable and all operations are pure functions, so values can
be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

from .errors import (
    DivisionByZeroError,
    MismatchedDiscError,
    NonrealDiscError,
    ZeroToNegativePowerError,
)

Rat = Fraction

_RatLike = Union[Rat, int]


def rat(numerator: int | str | Rat, denominator: int | None = None) -> Rat:
    """Build a canonical rational from ints, a ``num/den`` string, or another Rat."""
    if denominator is None:
        return Fraction(numerator)
    return Fraction(numerator, denominator)


def parse_rat(text: str) -> Rat:
    """Parse ``"num/den"`` or a bare integer string (optional sign) into a Rat."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def rat_str(value: Rat) -> str:
    """Canonical rendering: ``num/den``, or just ``num`` for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rat_arith(lhs: _RatLike, rhs: _RatLike, op: str) -> Rat:
    """Exact field arithmetic on rationals; ``op`` is add|sub|mul|div."""
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        if rhs == 0:
            raise DivisionByZeroError(lhs, rhs)
        return lhs / rhs
    raise ValueError(f"unknown op: {op!r}")


def _sqrt_if_square(value: Rat) -> Rat | None:
    """Return the exact rational square root of ``value``, or None."""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class QF:
    """An element ``x + y*sqrt(disc)`` of the quadratic field Q(sqrt(disc)).

    ``disc`` must be a nonzero rational.  If ``disc`` is a perfect rational
    square the radical is folded into the rational part at construction, so a
    value with ``y != 0`` always has an irrational radical.  ``disc < 0`` is
    allowed for formal arithmetic, but sign queries and decimal rendering
    reject such values unless they are purely rational (``y == 0``).
    """

    x: Rat
    y: Rat
    disc: Rat

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        object.__setattr__(self, "disc", Fraction(self.disc))
        if self.disc == 0:
            raise ValueError("disc must be nonzero")
        if self.y != 0:
            root = _sqrt_if_square(self.disc)
            if root is not None:
                object.__setattr__(self, "x", self.x + self.y * root)
                object.__setattr__(self, "y", Fraction(0))

    # -- basic structure ---------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.y == 0

    def conj(self) -> QF:
        """Radical conjugate ``x - y*sqrt(disc)``."""
        return QF(self.x, -self.y, self.disc)

    def norm(self) -> Rat:
        """Field norm ``x**2 - y**2 * disc`` (a rational)."""
        return self.x * self.x - self.y * self.y * self.disc

    def __bool__(self) -> bool:
        return self.x != 0 or self.y != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        if not isinstance(other, QF):
            return NotImplemented
        if self.y == 0 and other.y == 0:
            return self.x == other.x
        return self.x == other.x and self.y == other.y and self.disc == other.disc

    def __hash__(self):
        if self.y == 0:
            return hash(self.x)
        return hash((self.x, self.y, self.disc))

    def __repr__(self) -> str:
        return f"QF({self.x!r}, {self.y!r}, {self.disc!r})"

    def __str__(self) -> str:
        return qf_str(self)

    # -- arithmetic ----------------------------------------------------------

    def _coerced(self, other) -> tuple[QF, QF]:
        """Put both operands over a common disc.

        A purely rational side adopts the other side's disc; two genuinely
        irrational values must already agree.
        """
        if isinstance(other, (int, Fraction)):
            other = QF(Fraction(other), Fraction(0), self.disc)
        if not isinstance(other, QF):
            raise TypeError(f"cannot combine QF with {type(other).__name__}")
        if self.disc == other.disc:
            return self, other
        if other.y == 0:
            return self, QF(other.x, Fraction(0), self.disc)
        if self.y == 0:
            return QF(self.x, Fraction(0), other.disc), other
        raise MismatchedDiscError(self.disc, other.disc)

    def __add__(self, other) -> QF:
        a, b = self._coerced(other)
        return QF(a.x + b.x, a.y + b.y, a.disc)

    __radd__ = __add__

    def __neg__(self) -> QF:
        return QF(-self.x, -self.y, self.disc)

    def __sub__(self, other) -> QF:
        a, b = self._coerced(other)
        return QF(a.x - b.x, a.y - b.y, a.disc)

    def __rsub__(self, other) -> QF:
        return (-self).__add__(other)

    def __mul__(self, other) -> QF:
        a, b = self._coerced(other)
        return QF(
            a.x * b.x + a.y * b.y * a.disc,
            a.x * b.y + a.y * b.x,
            a.disc,
        )

    __rmul__ = __mul__

    def inverse(self) -> QF:
        """Multiplicative inverse via the conjugate and the norm."""
        n = self.norm()
        if n == 0:
            raise DivisionByZeroError(Fraction(1), self)
        return QF(self.x / n, -self.y / n, self.disc)

    def __truediv__(self, other) -> QF:
        a, b = self._coerced(other)
        if not b:
            raise DivisionByZeroError(a, b)
        return a * b.inverse()

    def __rtruediv__(self, other) -> QF:
        if not self:
            raise DivisionByZeroError(other, self)
        return self.inverse() * other


def qf(x: _RatLike, y: _RatLike, disc: _RatLike) -> QF:
    """Convenience constructor accepting ints or rationals."""
    return QF(Fraction(x), Fraction(y), Fraction(disc))


def qf_from_rat(value: _RatLike, disc: _RatLike) -> QF:
    """Lift a rational into Q(sqrt(disc))."""
    return QF(Fraction(value), Fraction(0), Fraction(disc))


def qf_arith(lhs: QF, rhs: QF, op: str) -> QF:
    """Exact field arithmetic over a shared disc; ``op`` is add|sub|mul|div."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown op: {op!r}")


def qf_pow(base: QF, exp: int) -> QF:
    """``base ** exp`` by binary exponentiation; ``exp`` may be negative."""
    if exp == 0:
        return QF(Fraction(1), Fraction(0), base.disc)
    if exp < 0:
        if not base:
            raise ZeroToNegativePowerError(f"0 ** {exp}")
        base = base.inverse()
        exp = -exp
    result = QF(Fraction(1), Fraction(0), base.disc)
    square = base
    while exp:
        if exp & 1:
            result = result * square
        exp >>= 1
        if exp:
            square = square * square
    return result


def qf_sign(value: QF) -> int:
    """Exact sign (-1, 0, +1) of ``x + y*sqrt(disc)`` under the real embedding.

    Decided purely by rational comparisons of ``x**2`` against ``y**2 * disc``;
    no floating point is involved.  Requires a real value: ``disc > 0``, or a
    purely rational carrier (``y == 0``).
    """
    if value.disc < 0 and value.y != 0:
        raise NonrealDiscError(f"sign undefined for disc = {value.disc}")
    x, y = value.x, value.y
    if y == 0:
        return (x > 0) - (x < 0)
    if x == 0:
        return 1 if y > 0 else -1
    if x > 0 and y > 0:
        return 1
    if x < 0 and y < 0:
        return -1
    # Opposite signs: compare |x| against |y|*sqrt(disc) via squares.
    lhs, rhs = x * x, y * y * value.disc
    if lhs == rhs:  # cannot occur after square-folding, but keep it total
        return 0
    if x > 0:  # y < 0
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


def qf_str(value: QF) -> str:
    """Fixed text form ``x + y*sqrt(D)`` with canonical rational pieces."""
    return f"{rat_str(value.x)} + {rat_str(value.y)}*sqrt({rat_str(value.disc)})"


# ---------------------------------------------------------------------------
# Decimal rendering
# ---------------------------------------------------------------------------

#: Guard digits used between the working precision and the reported digits.
GUARD_DIGITS = 20

#: Plain (non-exponent) notation covers |value| in [10**-6, 10**18).
_PLAIN_MIN_EXP = -6
_PLAIN_MAX_EXP = 17


@dataclass(frozen=True)
class Decimal:
    """A faithfully rounded decimal: ``sign * 0.digits * 10**(exponent+1)``.

    ``digits`` holds the significant digits with the decimal point implied
    after the first one (scientific normalization), ``exponent`` is the power
    of ten of the leading digit, and ``precision`` counts the digits kept.
    The rendered value differs from the exact source by less than one unit in
    the last reported digit.
    """

    sign: int
    digits: str
    exponent: int
    precision: int

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        prefix = "-" if self.sign < 0 else ""
        e, d = self.exponent, self.digits
        if _PLAIN_MIN_EXP <= e <= _PLAIN_MAX_EXP:
            if e >= len(d) - 1:
                body = d + "0" * (e - len(d) + 1)
            elif e >= 0:
                body = d[: e + 1] + "." + d[e + 1 :]
            else:
                body = "0." + "0" * (-e - 1) + d
        else:
            body = d[0] + ("." + d[1:] if len(d) > 1 else "") + f"e{e}"
        return prefix + body


_DECIMAL_ZERO = Decimal(0, "0", 0, 1)


def _floor_log10(value: Rat) -> int:
    """Largest e with 10**e <= value, for value > 0."""
    num, den = value.numerator, value.denominator
    e = len(str(num)) - len(str(den))
    # Off-by-one fixes; each loop runs at most twice.
    while 10**max(e, 0) * den > num * 10 ** max(-e, 0):
        e -= 1
    while 10 ** max(e + 1, 0) * den <= num * 10 ** max(-(e + 1), 0):
        e += 1
    return e


def round_rat_to_decimal(value: Rat, precision: int, trim: bool = True) -> Decimal:
    """Round a rational to ``precision`` significant digits (half away from zero).

    With ``trim`` enabled, a value that terminates within the precision is
    rendered exactly with its trailing zeros dropped.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    value = Fraction(value)
    if value == 0:
        return _DECIMAL_ZERO
    sign = 1 if value > 0 else -1
    mag = abs(value)
    e = _floor_log10(mag)
    shift = precision - 1 - e
    if shift >= 0:
        scaled_num, scaled_den = mag.numerator * 10**shift, mag.denominator
    else:
        scaled_num, scaled_den = mag.numerator, mag.denominator * 10**-shift
    q, rem = divmod(scaled_num, scaled_den)
    exact = rem == 0
    if not exact and 2 * rem >= scaled_den:
        q += 1
    if q == 10**precision:  # rounding carried into a new leading digit
        q //= 10
        e += 1
    digits = str(q)
    if exact and trim:
        digits = digits.rstrip("0") or "0"
    return Decimal(sign, digits, e, len(digits))


def sqrt_bounds(value: Rat, digits: int) -> tuple[Rat, Rat]:
    """Exact rational bounds ``lo <= sqrt(value) < hi`` with ``hi - lo <= 10**-digits``.

    Uses the arbitrary-precision integer square root with decimal scaling.
    """
    value = Fraction(value)
    if value < 0:
        raise NonrealDiscError(f"sqrt of negative value {value}")
    big = value.numerator * value.denominator
    scale = 10**digits
    root = isqrt(big * scale * scale)
    lo = Fraction(root, value.denominator * scale)
    hi = Fraction(root + 1, value.denominator * scale)
    return lo, hi


def qf_to_decimal(value: QF, precision: int) -> Decimal:
    """Faithfully rounded decimal rendering of a real quadratic-field value.

    Works at ``precision + GUARD_DIGITS`` digits internally, refining the
    radical approximation until the lower and upper rational bounds round to
    identical digit strings.  For irrational values this always terminates,
    because such a value is never itself a rounding boundary.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    if value.y == 0:
        return round_rat_to_decimal(value.x, precision)
    if value.disc < 0:
        raise NonrealDiscError(f"cannot render disc = {value.disc}")
    work = precision + GUARD_DIGITS
    t = work + 8
    while True:
        lo_root, hi_root = sqrt_bounds(value.disc, t)
        if value.y > 0:
            lo, hi = value.x + value.y * lo_root, value.x + value.y * hi_root
        else:
            lo, hi = value.x + value.y * hi_root, value.x + value.y * lo_root
        if lo > 0 or hi < 0:
            d_lo = round_rat_to_decimal(lo, precision, trim=False)
            d_hi = round_rat_to_decimal(hi, precision, trim=False)
            if d_lo == d_hi:
                return d_lo
        t *= 2


def decimal_str(value: QF | Rat | int, precision: int) -> str:
    """Render any exact value to a decimal string at the given precision."""
    if isinstance(value, QF):
        return str(qf_to_decimal(value, precision))
    return str(round_rat_to_decimal(Fraction(value), precision))
