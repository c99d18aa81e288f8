"""Exact coefficient fields for the algebraic layer.

Two fields are provided:

* ``QI`` -- Gaussian rationals a/d + (b/d)i with arbitrary-precision
  integers, stored over a common positive denominator.  This is the
  default field for certification: ideal membership of 1 over QI is
  preserved under extension to the complex numbers, so an exact
  unsatisfiability certificate transfers to C.
* ``GF(p)`` -- a prime field, for fast throwaway experiments.

Plain Python ``complex`` is accepted by the polynomial layer as a third,
inexact coefficient type; the helpers at the bottom dispatch on type.
"""

from __future__ import annotations

from fractions import Fraction

try:  # GMP-backed integers are a large constant-factor win once
    # elimination makes the numerators big; plain ints work identically
    from gmpy2 import gcd as _gcd
    from gmpy2 import mpz as _int
except ImportError:  # pragma: no cover
    from math import gcd as _gcd

    _int = int

_ONE = _int(1)


class QI:
    """Gaussian rational (re_num + im_num*i) / den, den > 0, gcd-reduced."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=1):
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        a = _int(a)
        b = _int(b)
        if d == 1:  # already canonical; the common case in reduction loops
            self.a = a
            self.b = b
            self.d = _ONE
            return
        d = _int(d)
        if d < 0:
            a, b, d = -a, -b, -d
        g = _gcd(_gcd(a, b), d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        self.a = a
        self.b = b
        self.d = d

    @classmethod
    def from_fractions(cls, re, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // _gcd(_int(re.denominator), _int(im.denominator))
        return cls(re.numerator * (d // re.denominator),
                   im.numerator * (d // im.denominator), d)

    @property
    def real(self):
        return Fraction(int(self.a), int(self.d))

    @property
    def imag(self):
        return Fraction(int(self.b), int(self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        if isinstance(other, QI):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, int):
            return self.b == 0 and self.d == 1 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __neg__(self):
        return QI(-self.a, -self.b, self.d)

    def __add__(self, other):
        return QI(self.a * other.d + other.a * self.d,
                  self.b * other.d + other.b * self.d,
                  self.d * other.d)

    def __sub__(self, other):
        return QI(self.a * other.d - other.a * self.d,
                  self.b * other.d - other.b * self.d,
                  self.d * other.d)

    def __mul__(self, other):
        return QI(self.a * other.a - self.b * other.b,
                  self.a * other.b + self.b * other.a,
                  self.d * other.d)

    def __truediv__(self, other):
        n = other.a * other.a + other.b * other.b
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QI(other.d * (self.a * other.a + self.b * other.b),
                  other.d * (self.b * other.a - self.a * other.b),
                  self.d * n)

    def conjugate(self):
        return QI(self.a, -self.b, self.d)

    def __complex__(self):
        # via Fraction: exact rounding and no overflow on huge integers
        return complex(float(Fraction(int(self.a), int(self.d))),
                       float(Fraction(int(self.b), int(self.d))))

    def __repr__(self):
        if self.b == 0:
            return f"QI({self.a}/{self.d})" if self.d != 1 else f"QI({self.a})"
        return f"QI({self.a}/{self.d}, {self.b}/{self.d})"

    ZERO = None  # filled in below
    ONE = None


QI.ZERO = QI(0)
QI.ONE = QI(1)


class GFElement:
    """Element of the prime field Z/pZ."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.v == other.v and self.p == other.p
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __neg__(self):
        return GFElement(-self.v, self.p)

    def __add__(self, other):
        return GFElement(self.v + other.v, self.p)

    def __sub__(self, other):
        return GFElement(self.v - other.v, self.p)

    def __mul__(self, other):
        return GFElement(self.v * other.v, self.p)

    def __truediv__(self, other):
        if other.v == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return GFElement(self.v * pow(other.v, self.p - 2, self.p), self.p)

    def conjugate(self):
        return self

    def __repr__(self):
        return f"GF{self.p}({self.v})"


def int_gcd(a, b):
    """gcd on the backing integer type (GMP when available)."""
    return _gcd(_int(a), _int(b))


def GF(p):
    """Return a constructor for GF(p) elements."""
    return lambda v: GFElement(v, p)


def one_like(c):
    """Multiplicative identity of the field c belongs to."""
    if isinstance(c, QI):
        return QI.ONE
    if isinstance(c, GFElement):
        return GFElement(1, c.p)
    return complex(1.0)


def zero_like(c):
    if isinstance(c, QI):
        return QI.ZERO
    if isinstance(c, GFElement):
        return GFElement(0, c.p)
    return complex(0.0)


def is_exact(c):
    """True for coefficient types with exact zero tests."""
    return isinstance(c, (QI, GFElement))
