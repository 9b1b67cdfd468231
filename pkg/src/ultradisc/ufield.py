"""Discretely valued fields with exact valuation tracking.

Three complete ultrametric fields are supported:

* ``Q_p``      -- p-adic numbers, elements ``p**v * u`` with ``u`` a unit
                  known modulo ``p**r`` (``r`` = relative precision);
* ``F_p((T))`` -- Laurent series over the prime field;
* ``Q((T))``   -- Laurent series over the rationals.

Absolute values are never materialised as reals. ``|x| = q**(-v(x))`` for an
abstract base ``q > 1`` and every magnitude comparison in the package is a
valuation comparison.

Precision model
---------------
A nonzero :class:`Scalar` is ``pi**v * u`` where ``pi`` is the uniformizer
(``p`` or ``T``) and ``u`` is a unit. The unit is either *exact* (``r is None``:
an integer coprime to ``p``, or a polynomial in ``T`` with nonzero constant
term) or known to ``r`` digits/coefficients. Exact values whose unit outgrows
the field precision are rounded to it. Sums that cancel every tracked digit
become ``ZeroToPrecision(m)`` ("v >= m"), which is a first-class value; only
literal zero and products/sums of exact zeros are ``ExactZero``.

Laurent units are stored as python-flint polynomials (``nmod_poly`` for
``F_p``, ``fmpq_poly`` for ``Q``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import flint

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NonInvertibleDenominator,
    ParseError,
    PrecisionExhausted,
)

DEFAULT_PADIC_PRECISION = 64
DEFAULT_LAURENT_WINDOW = 256


class FieldKind(str, Enum):
    PADIC = "padic"
    LAURENT_FP = "laurent_fp"
    LAURENT_Q = "laurent_q"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


@lru_cache(maxsize=None)
def _ppow(p: int, e: int) -> int:
    return p**e


def _vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    t = 0
    while n % p == 0:
        n //= p
        t += 1
    return t


@dataclass(frozen=True)
class FieldDesc:
    """Which field a scalar lives in, and its working precision.

    ``precision`` counts relative p-adic digits, or the Laurent coefficient
    window. ``0`` selects the default for the kind.
    """

    kind: FieldKind
    p: int | None = None
    precision: int = 0

    def __post_init__(self):
        kind = FieldKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.precision == 0:
            default = DEFAULT_PADIC_PRECISION if kind is FieldKind.PADIC else DEFAULT_LAURENT_WINDOW
            object.__setattr__(self, "precision", default)
        if not isinstance(self.precision, int) or self.precision < 1:
            raise ValueError(f"precision must be a positive integer, got {self.precision!r}")
        if kind is FieldKind.LAURENT_Q:
            if self.p is not None:
                raise ValueError("Q((T)) takes no prime")
        elif self.p is None or not is_prime(self.p):
            raise ValueError(f"{kind.value} needs a prime p, got {self.p!r}")

    @classmethod
    def padic(cls, p: int, precision: int = 0) -> "FieldDesc":
        return cls(FieldKind.PADIC, p, precision)

    @classmethod
    def laurent_fp(cls, p: int, precision: int = 0) -> "FieldDesc":
        return cls(FieldKind.LAURENT_FP, p, precision)

    @classmethod
    def laurent_q(cls, precision: int = 0) -> "FieldDesc":
        return cls(FieldKind.LAURENT_Q, None, precision)

    @property
    def is_laurent(self) -> bool:
        return self.kind is not FieldKind.PADIC

    @property
    def symbol(self) -> str:
        """Printed name of the uniformizer."""
        return "T" if self.is_laurent else str(self.p)

    def __str__(self) -> str:
        if self.kind is FieldKind.PADIC:
            return f"Q_{self.p}"
        if self.kind is FieldKind.LAURENT_FP:
            return f"F_{self.p}((T))"
        return "Q((T))"

    # -- constructors -------------------------------------------------------

    def zero(self) -> "Scalar":
        return Scalar(self, _ZERO)

    def zero_to_precision(self, m: int) -> "Scalar":
        return Scalar(self, _ZTP, m)

    def one(self) -> "Scalar":
        return self.from_int(1)

    def from_int(self, n: int) -> "Scalar":
        return self.from_fraction(Fraction(n))

    def from_fraction(self, x) -> "Scalar":
        x = Fraction(x)
        if x == 0:
            return self.zero()
        if self.kind is FieldKind.PADIC:
            p = self.p
            a, b = x.numerator, x.denominator
            va, vb = _vp(a, p), _vp(b, p)
            a //= _ppow(p, va)
            b //= _ppow(p, vb)
            if b == 1:
                return _normalize(self, va - vb, a, None)
            mod = _ppow(p, self.precision)
            return _normalize(self, va - vb, a * pow(b, -1, mod), self.precision)
        return _normalize(self, 0, self._poly([self._coeff(x)]), None)

    def uniformizer_power(self, e: int) -> "Scalar":
        """The exact element ``pi**e``."""
        if self.kind is FieldKind.PADIC:
            return Scalar(self, _NZ, e, 1, None)
        return Scalar(self, _NZ, e, self._poly([1]), None)

    def laurent(self, coeffs, valuation: int = 0, precision: int | None = None) -> "Scalar":
        """Build ``sum coeffs[i] * T**(valuation+i)``; exact unless ``precision`` given.

        ``precision`` is an absolute precision (coefficients from ``T**precision``
        on are unknown).
        """
        if not self.is_laurent:
            raise FieldMismatch(f"{self} is not a Laurent series field")
        poly = self._poly([self._coeff(Fraction(c)) for c in coeffs])
        r = None if precision is None else precision - valuation
        if r is not None and r <= 0:
            return self.zero_to_precision(precision)
        return _normalize(self, valuation, poly, r)

    def parse(self, literal: str) -> "Scalar":
        return parse_scalar(self, literal)

    # -- unit-ring helpers (Laurent only) ---------------------------------

    def _coeff(self, x: Fraction):
        if self.kind is FieldKind.LAURENT_FP:
            p = self.p
            if x.denominator % p == 0:
                raise NonInvertibleDenominator(f"denominator of {x} is not invertible mod {p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        return flint.fmpq(x.numerator, x.denominator)

    def _poly(self, coeffs):
        if self.kind is FieldKind.LAURENT_FP:
            return flint.nmod_poly(coeffs, self.p)
        return flint.fmpq_poly(coeffs)


_ZERO, _ZTP, _NZ = 0, 1, 2


def _coeff_to_fraction(field: FieldDesc, c) -> Fraction:
    if field.kind is FieldKind.LAURENT_FP:
        return Fraction(int(c))
    return Fraction(int(c.p), int(c.q))


def _normalize(field: FieldDesc, v: int, raw, r: int | None) -> "Scalar":
    """Turn ``pi**v * raw`` (raw possibly divisible by pi) into a Scalar."""
    cap = field.precision
    if field.kind is FieldKind.PADIC:
        p = field.p
        if r is not None:
            raw %= _ppow(p, r)
            if raw == 0:
                return Scalar(field, _ZTP, v + r)
            if raw % p == 0:
                t = _vp(raw, p)
                raw //= _ppow(p, t)
                v += t
                r -= t
            return Scalar(field, _NZ, v, raw, r)
        if raw == 0:
            return Scalar(field, _ZERO)
        if raw % p == 0:
            t = _vp(raw, p)
            raw //= _ppow(p, t)
            v += t
        bound = _ppow(p, cap)
        if raw >= bound or -raw >= bound:
            return Scalar(field, _NZ, v, raw % bound, cap)
        return Scalar(field, _NZ, v, raw, None)

    if r is not None and raw.length() > r:
        raw = raw.truncate(r)
    if raw.is_zero():
        return Scalar(field, _ZERO) if r is None else Scalar(field, _ZTP, v + r)
    if raw[0] == 0:
        coeffs = raw.coeffs()
        t = next(i for i, c in enumerate(coeffs) if c != 0)
        raw = raw.right_shift(t)
        v += t
        if r is not None:
            r -= t
    if r is None and raw.length() > cap:
        raw = raw.truncate(cap)
        r = cap
    return Scalar(field, _NZ, v, raw, r)


def _series_inverse_q(u, n: int):
    """Inverse of a unit power series over Q modulo T**n (Newton iteration)."""
    inv = flint.fmpq_poly([1 / u[0]])
    prec = 1
    two = flint.fmpq_poly([2])
    while prec < n:
        prec = min(2 * prec, n)
        e = u.truncate(prec).mul_low(inv, prec)
        inv = inv.mul_low(two - e, prec)
    return inv


class Scalar:
    """An immutable element of a :class:`FieldDesc`.

    Use the field's constructors or :func:`parse_scalar`; the initializer is
    internal.
    """

    __slots__ = ("field", "_tag", "_v", "_u", "_r")

    def __init__(self, field: FieldDesc, tag: int, v: int = 0, u=None, r: int | None = None):
        self.field = field
        self._tag = tag
        self._v = v
        self._u = u
        self._r = r

    # -- inspection -----------------------------------------------------------

    @property
    def is_exact_zero(self) -> bool:
        return self._tag == _ZERO

    @property
    def is_zero_to_precision(self) -> bool:
        return self._tag == _ZTP

    def is_zero(self) -> bool:
        """True for ExactZero and ZeroToPrecision alike."""
        return self._tag != _NZ

    @property
    def is_exact(self) -> bool:
        return self._tag == _ZERO or (self._tag == _NZ and self._r is None)

    def valuation(self):
        """Exact valuation; ``math.inf`` for ExactZero; the bound ``m`` for ZeroToPrecision(m).

        Check :attr:`is_zero_to_precision` when the distinction matters.
        """
        if self._tag == _ZERO:
            return math.inf
        return self._v

    @property
    def relative_precision(self) -> int | None:
        """Tracked digits of the unit; ``None`` when exact."""
        return self._r if self._tag == _NZ else None

    @property
    def absolute_precision(self):
        """Valuation up to which the value is known (``math.inf`` when exact)."""
        if self._tag == _ZERO:
            return math.inf
        if self._tag == _ZTP:
            return self._v
        return math.inf if self._r is None else self._v + self._r

    def coefficient(self, e: int) -> Fraction:
        """Coefficient of ``T**e`` of a Laurent scalar."""
        if not self.field.is_laurent:
            raise FieldMismatch("coefficient() is for Laurent series")
        if e >= self.absolute_precision:
            raise PrecisionExhausted(f"coefficient of T^{e} is beyond the tracked precision")
        if self._tag != _NZ or e < self._v:
            return Fraction(0)
        return _coeff_to_fraction(self.field, self._u[e - self._v])

    def laurent_terms(self) -> list[tuple[int, Fraction]]:
        """Nonzero ``(exponent, coefficient)`` pairs of a Laurent scalar."""
        if not self.field.is_laurent:
            raise FieldMismatch("laurent_terms() is for Laurent series")
        if self._tag != _NZ:
            return []
        return [
            (self._v + i, _coeff_to_fraction(self.field, c))
            for i, c in enumerate(self._u.coeffs())
            if c != 0
        ]

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        if self._tag != _NZ:
            return self
        f = self.field
        if f.kind is FieldKind.PADIC:
            u = -self._u if self._r is None else (-self._u) % _ppow(f.p, self._r)
        else:
            u = -self._u
        return Scalar(f, _NZ, self._v, u, self._r)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(other, -self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self._tag == _ZERO:
            raise DivisionByZero("division by exact zero")
        if self._tag == _ZTP:
            raise PrecisionExhausted(f"cannot invert a value known only to be O(pi^{self._v})")
        return _inverse(self)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        inv = other.inverse()
        return _mul(self, inv)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(other, self.inverse())

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison / display --------------------------------------------------

    def _key(self):
        if self._tag != _NZ:
            return (self.field, self._tag, self._v)
        u = self._u if not self.field.is_laurent else tuple(str(c) for c in self._u.coeffs())
        return (self.field, _NZ, self._v, u, self._r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({self.field}, {format_scalar(self)!r})"


def _check(x: Scalar, y: Scalar):
    if x.field != y.field:
        raise FieldMismatch(f"cannot combine {x.field} and {y.field}")


def _add(x: Scalar, y: Scalar) -> Scalar:
    _check(x, y)
    if x._tag == _ZERO:
        return y
    if y._tag == _ZERO:
        return x
    if x._tag == _ZTP and y._tag == _ZTP:
        return x if x._v <= y._v else y
    if x._tag == _ZTP:
        x, y = y, x
    if y._tag == _ZTP:
        m = y._v
        if x._v >= m:
            return Scalar(x.field, _ZTP, min(m, x.absolute_precision))
        r = m - x._v if x._r is None else min(x._r, m - x._v)
        return _normalize(x.field, x._v, x._u, r)

    if x._v > y._v:
        x, y = y, x
    field = x.field
    v0 = x._v
    a1 = None if x._r is None else v0 + x._r
    a2 = None if y._r is None else y._v + y._r
    if a1 is None:
        A = a2
    elif a2 is None:
        A = a1
    else:
        A = min(a1, a2)
    r = None if A is None else A - v0
    shift = y._v - v0
    if r is not None and shift >= r:
        return _normalize(field, v0, x._u, r)
    if field.kind is FieldKind.PADIC:
        raw = x._u + y._u * _ppow(field.p, shift)
    elif shift:
        raw = x._u + y._u.left_shift(shift)
    else:
        raw = x._u + y._u
    return _normalize(field, v0, raw, r)


def _mul(x: Scalar, y: Scalar) -> Scalar:
    _check(x, y)
    if x._tag == _ZERO or y._tag == _ZERO:
        return Scalar(x.field, _ZERO)
    if x._tag == _ZTP or y._tag == _ZTP:
        return Scalar(x.field, _ZTP, x._v + y._v)
    field = x.field
    v = x._v + y._v
    if x._r is None:
        r = y._r
    elif y._r is None:
        r = x._r
    else:
        r = min(x._r, y._r)
    if field.kind is FieldKind.PADIC:
        return _normalize(field, v, x._u * y._u, r)
    if r is None:
        raw = x._u * y._u
    else:
        raw = x._u.mul_low(y._u, r)
    return _normalize(field, v, raw, r)


def _inverse(x: Scalar) -> Scalar:
    field = x.field
    u, r = x._u, x._r
    if field.kind is FieldKind.PADIC:
        if r is None and u in (1, -1):
            return Scalar(field, _NZ, -x._v, u, None)
        n = field.precision if r is None else r
        return Scalar(field, _NZ, -x._v, pow(u, -1, _ppow(field.p, n)), n)
    if r is None and u.length() == 1:
        if field.kind is FieldKind.LAURENT_FP:
            c = pow(int(u[0]), -1, field.p)
            return Scalar(field, _NZ, -x._v, field._poly([c]), None)
        return Scalar(field, _NZ, -x._v, flint.fmpq_poly([1 / u[0]]), None)
    n = field.precision if r is None else r
    if field.kind is FieldKind.LAURENT_FP:
        inv = u.inverse_series_trunc(n)
    else:
        inv = _series_inverse_q(u, n)
    return Scalar(field, _NZ, -x._v, inv, n)


def valuation(x: Scalar):
    """Functional spelling of :meth:`Scalar.valuation`."""
    return x.valuation()


# --------------------------------------------------------------------------
# literals
# --------------------------------------------------------------------------

_NUM = re.compile(r"\d+")


class _Parser:
    def __init__(self, field: FieldDesc, text: str):
        self.field = field
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise ParseError(msg, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def integer(self) -> int:
        self.skip()
        m = _NUM.match(self.text, self.pos)
        if not m:
            self.error("expected digits")
        self.pos = m.end()
        return int(m.group())

    def signed_integer(self) -> int:
        neg = False
        if self.eat("-"):
            neg = True
        elif self.eat("+"):
            pass
        n = self.integer()
        return -n if neg else n

    def exponent(self) -> int:
        return self.signed_integer() if self.eat("^") else 1

    def base_power(self) -> int:
        """Parse the uniformizer with optional exponent; returns the exponent."""
        if self.field.is_laurent:
            if not self.eat("T"):
                self.error("expected T")
            return self.exponent()
        start = self.pos
        if self.integer() != self.field.p:
            self.pos = start
            self.error(f"expected the prime {self.field.p}")
        if self.peek() != "^":
            self.error("expected ^ after the prime")
        return self.exponent()

    def term(self):
        """Returns ('term', coefficient, exponent) or ('big_o', exponent)."""
        ch = self.peek()
        if ch == "O":
            self.pos += 1
            if not self.eat("("):
                self.error("expected ( after O")
            e = self.base_power()
            if not self.eat(")"):
                self.error("expected )")
            return ("big_o", e)
        if ch == "T":
            return ("term", Fraction(1), self.base_power())
        if not ch.isdigit():
            self.error("expected a term")
        start = self.pos
        num = self.integer()
        if not self.field.is_laurent and num == self.field.p and self.peek() == "^":
            self.pos = start
            return ("term", Fraction(1), self.base_power())
        coeff = Fraction(num)
        if self.eat("/"):
            den = self.integer()
            if den == 0:
                self.error("zero denominator")
            coeff = Fraction(num, den)
        has_star = self.eat("*")
        nxt = self.peek()
        if has_star or nxt == "T":
            return ("term", coeff, self.base_power())
        return ("term", coeff, 0)

    def parse(self):
        terms = []
        big_o = None
        sign = 1
        if self.eat("-"):
            sign = -1
        else:
            self.eat("+")
        while True:
            kind, *rest = self.term()
            if kind == "big_o":
                if sign < 0:
                    self.error("O(...) cannot be negated")
                big_o = rest[0] if big_o is None else min(big_o, rest[0])
            else:
                terms.append((sign * rest[0], rest[1]))
            ch = self.peek()
            if ch == "":
                break
            if ch == "+":
                sign = 1
            elif ch == "-":
                sign = -1
            else:
                self.error(f"unexpected character {ch!r}")
            self.pos += 1
        return terms, big_o


def parse_scalar(field: FieldDesc, literal: str) -> Scalar:
    """Parse a scalar literal.

    p-adic: a signed integer or fraction, optionally times ``p^k``; terms may
    be summed, e.g. ``-1/20``, ``3*5^2 + 1``, ``7/2*5^-3 + O(5^40)``.
    Laurent: sums of ``c*T^k`` terms (``*`` optional, ``T`` means ``T^1``),
    e.g. ``T^-1 + 2*T^2``. An ``O(pi^m)`` term marks absolute precision ``m``.
    """
    parser = _Parser(field, literal)
    if parser.peek() == "":
        raise ParseError("empty literal", 0)
    terms, big_o = parser.parse()
    if field.kind is FieldKind.PADIC:
        total = Fraction(0)
        for c, e in terms:
            total += c * Fraction(field.p) ** e
        value = field.from_fraction(total)
    else:
        collected: dict[int, Fraction] = {}
        for c, e in terms:
            collected[e] = collected.get(e, Fraction(0)) + c
        collected = {e: c for e, c in collected.items() if c != 0}
        if not collected:
            value = field.zero()
        else:
            lo, hi = min(collected), max(collected)
            try:
                value = field.laurent([collected.get(e, 0) for e in range(lo, hi + 1)], lo)
            except NonInvertibleDenominator as exc:
                raise NonInvertibleDenominator(str(exc), 0) from None
    if big_o is not None:
        value = value + field.zero_to_precision(big_o)
    return value


def _rational_reconstruction(u: int, mod: int) -> tuple[int, int] | None:
    """Find a/b with a == u*b (mod mod) and |a|, b <= sqrt(mod/2)."""
    bound = math.isqrt(mod // 2)
    r0, r1 = mod, u % mod
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    a, b = (r1, s1) if s1 > 0 else (-r1, -s1)
    if math.gcd(a, b) != 1:
        return None
    return a, b


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_scalar(x: Scalar) -> str:
    """Canonical literal; ``parse_scalar(field, format_scalar(x)) == x``."""
    field = x.field
    sym = field.symbol
    if x._tag == _ZERO:
        return "0"
    if x._tag == _ZTP:
        return f"O({sym}^{x._v})"
    if field.kind is FieldKind.PADIC:
        p = field.p
        if x._r is None:
            return _fmt_fraction(Fraction(x._u) * Fraction(p) ** x._v)
        mod = _ppow(p, x._r)
        tail = f" + O({sym}^{x._v + x._r})"
        rec = _rational_reconstruction(x._u, mod)
        if rec is not None and rec[0] % p and rec[1] % p:
            return _fmt_fraction(Fraction(rec[0], rec[1]) * Fraction(p) ** x._v) + tail
        if x._v == 0:
            return f"{x._u}{tail}"
        return f"{x._u}*{sym}^{x._v}{tail}"

    parts = []
    for e, c in x.laurent_terms():
        neg = c < 0
        c = abs(c)
        if e == 0:
            body = _fmt_fraction(c)
        else:
            mono = "T" if e == 1 else f"T^{e}"
            body = mono if c == 1 else f"{_fmt_fraction(c)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    text = "".join(parts)
    if x._r is not None:
        text += f" + O(T^{x._v + x._r})"
    return text
