"""Exact arithmetic in quadratic number fields Q(sqrt d)."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

from sympy import factorint


class FieldError(ValueError):
    pass


def squarefree_part(n) -> int:
    """Squarefree integer in the same rational square class as ``n``."""
    q = Fraction(n)
    if q == 0:
        raise FieldError("zero has no square class")
    num = q.numerator * q.denominator  # multiply by the square of the denominator
    sign = -1 if num < 0 else 1
    out = 1
    for p, e in factorint(abs(num)).items():
        if e % 2:
            out *= p
    return sign * out


def is_rational_square(q) -> bool:
    q = Fraction(q)
    if q < 0:
        return False
    if q == 0:
        return True
    return _is_square_int(q.numerator) and _is_square_int(q.denominator)


def rational_sqrt(q) -> Fraction:
    q = Fraction(q)
    if not is_rational_square(q):
        raise FieldError(f"{q} is not a rational square")
    from math import isqrt

    return Fraction(isqrt(q.numerator), isqrt(q.denominator))


def _is_square_int(n: int) -> bool:
    from math import isqrt

    return n >= 0 and isqrt(n) ** 2 == n


class QuadraticField:
    """The field ``Q(sqrt d)`` for a squarefree integer ``d`` other than 0 and 1."""

    _instances: dict = {}

    def __new__(cls, d: int):
        d = int(d)
        if d in cls._instances:
            return cls._instances[d]
        if d in (0, 1) or squarefree_part(d) != d:
            raise FieldError(f"d = {d} is not a squarefree integer other than 0, 1")
        self = super().__new__(cls)
        self.d = d
        cls._instances[d] = self
        return self

    def __getnewargs__(self):
        return (self.d,)

    def __repr__(self):
        return f"QuadraticField({self.d})"

    def __call__(self, a=0, b=0) -> "QElement":
        if isinstance(a, QElement):
            if a.field is not self:
                raise FieldError("element belongs to another field")
            return a
        return QElement(self, Fraction(a), Fraction(b))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def gen(self):
        """``sqrt d``."""
        return self(0, 1)

    def parse(self, x) -> "QElement":
        """Accept ``[a, b]`` pairs, ``[[an, ad], [bn, bd]]`` pairs of fractions, numbers or elements."""
        if isinstance(x, QElement):
            return self(x)
        if isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise FieldError(f"cannot parse field element {x!r}")
            return self(_parse_rational(x[0]), _parse_rational(x[1]))
        return self(_parse_rational(x))


def _parse_rational(x) -> Fraction:
    if isinstance(x, (list, tuple)):
        if len(x) != 2 or x[1] == 0:
            raise FieldError(f"bad numerator/denominator pair {x!r}")
        return Fraction(int(x[0]), int(x[1]))
    return Fraction(x)


@total_ordering
class QElement:
    """``a + b sqrt d`` with rational ``a``, ``b``."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: QuadraticField, a: Fraction, b: Fraction):
        self.field = field
        self.a = a
        self.b = b

    def _coerce(self, other):
        if isinstance(other, QElement):
            if other.field is not self.field:
                raise FieldError("mixing elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QElement(self.field, Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.field.d
        return QElement(self.field, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def conjugate(self) -> "QElement":
        return QElement(self.field, self.a, -self.b)

    def inverse(self) -> "QElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QElement(self.field, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QElement(self.field, Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QElement):
            return self.field is other.field and self.a == other.a and self.b == other.b
        return NotImplemented

    def __lt__(self, other):  # only for deterministic sorting
        o = self._coerce(other)
        return (self.a, self.b) < (o.a, o.b)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.field.d, self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def to_pair(self):
        """JSON-friendly ``[[an, ad], [bn, bd]]``."""
        return [[self.a.numerator, self.a.denominator], [self.b.numerator, self.b.denominator]]

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        return f"({self.a} + {self.b}*sqrt({self.field.d}))"


__all__ = [
    "FieldError",
    "QElement",
    "QuadraticField",
    "is_rational_square",
    "rational_sqrt",
    "squarefree_part",
]
