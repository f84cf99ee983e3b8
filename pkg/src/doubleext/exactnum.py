"""Exact scalar fields: the rationals, quadratic extensions Q(a), and GF(q).

Rationals are plain :class:`fractions.Fraction` values.  Elements of a
quadratic extension and of a prime field are small immutable objects that
remember their field; ints (and, for Q(a), Fractions) coerce automatically.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction]


class FieldMismatchError(TypeError):
    """Operands live in different fields."""


class ParseError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _rational_sqrt(x: Fraction):
    """Return the rational square root of x, or None."""
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def _fmt_q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_RAT = re.compile(r"^[+-]?\d+(/\d+)?$")


def _parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RAT.match(text):
        raise ParseError(f"not a rational number: {text!r}")
    return Fraction(text)


class Field:
    """Base class for the supported coefficient fields."""

    kind = "abstract"

    def coerce(self, x):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def spec(self) -> str:
        raise NotImplementedError

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def inv(self, x):
        x = self.coerce(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def __repr__(self):
        return f"<field {self.spec()}>"

    def __str__(self):
        return self.spec()


class RationalField(Field):
    kind = "rationals"

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, QuadraticElement) and x.c1 == 0:
            return x.c0
        raise FieldMismatchError(f"{x!r} is not a rational")

    def parse(self, text):
        return _parse_rational(text)

    def format(self, x):
        return _fmt_q(self.coerce(x))

    def spec(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


QQ = RationalField()


class QuadraticField(Field):
    """Q(a) with a^2 + u*a + v = 0, the polynomial irreducible over Q."""

    kind = "quadratic-extension"

    def __init__(self, u: Number, v: Number):
        self.u, self.v = Fraction(u), Fraction(v)
        disc = self.u * self.u - 4 * self.v
        if _rational_sqrt(disc) is not None:
            raise ValueError(f"a^2 + ({self.u})a + ({self.v}) has a rational root")
        self.gen = QuadraticElement(self, Fraction(0), Fraction(1))

    @property
    def minpoly(self):
        return (self.u, self.v)

    def coerce(self, x):
        if isinstance(x, QuadraticElement):
            if x.field != self:
                raise FieldMismatchError(f"{x!r} is not in {self.spec()}")
            return x
        if isinstance(x, (int, Fraction)):
            return QuadraticElement(self, Fraction(x), Fraction(0))
        raise FieldMismatchError(f"cannot coerce {x!r} into {self.spec()}")

    def parse(self, text):
        s = text.replace(" ", "")
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        if not s:
            raise ParseError("empty scalar")
        c0, c1 = Fraction(0), Fraction(0)
        for m in re.finditer(r"[+-]?[^+-]+", s):
            term = m.group(0)
            if term.endswith("a"):
                coef = term[:-1]
                if coef in ("", "+"):
                    c1 += 1
                elif coef == "-":
                    c1 -= 1
                else:
                    c1 += _parse_rational(coef.rstrip("*"))
            else:
                c0 += _parse_rational(term)
        if "".join(m.group(0) for m in re.finditer(r"[+-]?[^+-]+", s)) != s:
            raise ParseError(f"bad scalar {text!r}")
        return QuadraticElement(self, c0, c1)

    def format(self, x):
        x = self.coerce(x)
        if x.c1 == 0:
            return _fmt_q(x.c0)
        if x.c1 == 1:
            tail = "a"
        elif x.c1 == -1:
            tail = "-a"
        else:
            tail = _fmt_q(x.c1) + "a"
        if x.c0 == 0:
            return tail
        sep = "" if tail.startswith("-") else "+"
        return f"{_fmt_q(x.c0)}{sep}{tail}"

    def spec(self):
        parts = ["a^2"]
        for coef, mon in ((self.u, "a"), (self.v, "")):
            if coef == 0:
                continue
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            if mon and mag == 1:
                parts.append(f"{sign}{mon}")
            else:
                parts.append(f"{sign}{_fmt_q(mag)}{mon}")
        return "Q(" + "".join(parts) + ")"

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(("Q", self.u, self.v))


class QuadraticElement:
    """c0 + c1*a in a :class:`QuadraticField`."""

    __slots__ = ("field", "c0", "c1")

    def __init__(self, field: QuadraticField, c0: Fraction, c1: Fraction):
        self.field = field
        self.c0 = c0
        self.c1 = c1

    def _other(self, y):
        if isinstance(y, QuadraticElement):
            if y.field is not self.field and y.field != self.field:
                raise FieldMismatchError(f"{self.field.spec()} vs {y.field.spec()}")
            return y.c0, y.c1
        if isinstance(y, (int, Fraction)):
            return Fraction(y), Fraction(0)
        if isinstance(y, ModElement):
            raise FieldMismatchError(f"{self.field.spec()} vs {y.field.spec()}")
        return NotImplemented

    def __add__(self, y):
        o = self._other(y)
        if o is NotImplemented:
            return o
        return QuadraticElement(self.field, self.c0 + o[0], self.c1 + o[1])

    __radd__ = __add__

    def __neg__(self):
        return QuadraticElement(self.field, -self.c0, -self.c1)

    def __sub__(self, y):
        o = self._other(y)
        if o is NotImplemented:
            return o
        return QuadraticElement(self.field, self.c0 - o[0], self.c1 - o[1])

    def __rsub__(self, y):
        return (-self) + y

    def __mul__(self, y):
        o = self._other(y)
        if o is NotImplemented:
            return o
        d0, d1 = o
        u, v = self.field.u, self.field.v
        cc = self.c1 * d1
        # a^2 = -u*a - v
        return QuadraticElement(
            self.field,
            self.c0 * d0 - v * cc,
            self.c0 * d1 + self.c1 * d0 - u * cc,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        u, v = self.field.u, self.field.v
        return self.c0 * self.c0 - u * self.c0 * self.c1 + v * self.c1 * self.c1

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        # conjugate of a is -u - a
        return QuadraticElement(
            self.field, (self.c0 - self.field.u * self.c1) / n, -self.c1 / n
        )

    def __truediv__(self, y):
        if isinstance(y, (int, Fraction)):
            if y == 0:
                raise ZeroDivisionError("division by zero")
            return QuadraticElement(self.field, self.c0 / y, self.c1 / y)
        return self * self.field.coerce(y).inverse()

    def __rtruediv__(self, y):
        return self.inverse() * y

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, y):
        try:
            o = self._other(y)
        except FieldMismatchError:
            return False
        if o is NotImplemented:
            return False
        return self.c0 == o[0] and self.c1 == o[1]

    def __hash__(self):
        if self.c1 == 0:
            return hash(self.c0)
        return hash((self.c0, self.c1))

    def __bool__(self):
        return self.c0 != 0 or self.c1 != 0

    def __repr__(self):
        return self.field.format(self)

    __str__ = __repr__


class PrimeField(Field):
    kind = "prime-field"

    def __init__(self, q: int):
        if not _is_prime(q):
            raise ValueError(f"{q} is not prime")
        if q > 257:
            raise ValueError("prime fields are limited to q <= 257")
        self.q = q

    @property
    def modulus(self):
        return self.q

    def coerce(self, x):
        if isinstance(x, ModElement):
            if x.field != self:
                raise FieldMismatchError(f"{x.field.spec()} vs {self.spec()}")
            return x
        if isinstance(x, int):
            return ModElement(self, x % self.q)
        if isinstance(x, Fraction):
            if x.denominator % self.q == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.q})")
            return ModElement(self, x.numerator * pow(x.denominator, -1, self.q) % self.q)
        raise FieldMismatchError(f"cannot coerce {x!r} into {self.spec()}")

    def parse(self, text):
        s = text.replace(" ", "")
        m = re.match(r"^(.*)mod(\d+)$", s)
        if m:
            if int(m.group(2)) != self.q:
                raise FieldMismatchError(f"{text!r} is not in GF({self.q})")
            s = m.group(1)
        return self.coerce(_parse_rational(s))

    def format(self, x):
        return f"{self.coerce(x).r} mod {self.q}"

    def spec(self):
        return f"GF({self.q})"

    def elements(self):
        return [ModElement(self, r) for r in range(self.q)]

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))


class ModElement:
    __slots__ = ("field", "r")

    def __init__(self, field: PrimeField, r: int):
        self.field = field
        self.r = r

    def _other(self, y):
        if isinstance(y, ModElement):
            if y.field.q != self.field.q:
                raise FieldMismatchError(f"{self.field.spec()} vs {y.field.spec()}")
            return y.r
        if isinstance(y, int):
            return y % self.field.q
        if isinstance(y, Fraction):
            return self.field.coerce(y).r
        if isinstance(y, QuadraticElement):
            raise FieldMismatchError(f"{self.field.spec()} vs {y.field.spec()}")
        return NotImplemented

    def __add__(self, y):
        o = self._other(y)
        if o is NotImplemented:
            return o
        return ModElement(self.field, (self.r + o) % self.field.q)

    __radd__ = __add__

    def __neg__(self):
        return ModElement(self.field, -self.r % self.field.q)

    def __sub__(self, y):
        o = self._other(y)
        if o is NotImplemented:
            return o
        return ModElement(self.field, (self.r - o) % self.field.q)

    def __rsub__(self, y):
        return (-self) + y

    def __mul__(self, y):
        o = self._other(y)
        if o is NotImplemented:
            return o
        return ModElement(self.field, self.r * o % self.field.q)

    __rmul__ = __mul__

    def inverse(self):
        if self.r == 0:
            raise ZeroDivisionError("inverse of zero")
        return ModElement(self.field, pow(self.r, -1, self.field.q))

    def __truediv__(self, y):
        o = self._other(y)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero")
        return ModElement(self.field, self.r * pow(o, -1, self.field.q) % self.field.q)

    def __rtruediv__(self, y):
        return self.inverse() * y

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return ModElement(self.field, pow(self.r, n, self.field.q))

    def __eq__(self, y):
        try:
            o = self._other(y)
        except FieldMismatchError:
            return False
        if o is NotImplemented:
            return False
        return self.r == o

    def __hash__(self):
        return hash(self.r)

    def __bool__(self):
        return self.r != 0

    def __repr__(self):
        return f"{self.r} mod {self.field.q}"

    __str__ = __repr__


def parse_field(text: str) -> Field:
    """Parse ``Q``, ``Q(a^2+1)``, ``Q(a^2+a+1)``, ``Q(a^2-2)`` or ``GF(11)``."""
    s = text.replace(" ", "")
    if s in ("Q", "QQ"):
        return QQ
    m = re.match(r"^GF\((\d+)\)$", s)
    if m:
        return PrimeField(int(m.group(1)))
    m = re.match(r"^Q\(a\^2(.*)\)$", s)
    if not m:
        raise ParseError(f"unknown field {text!r}")
    u, v = Fraction(0), Fraction(0)
    rest = m.group(1)
    for t in re.finditer(r"[+-][^+-]+", rest):
        term = t.group(0)
        if term.endswith("a"):
            c = term[:-1].rstrip("*")
            u += Fraction(int(c + "1")) if c in ("+", "-") else _parse_rational(c)
        else:
            v += _parse_rational(term)
    if "".join(t.group(0) for t in re.finditer(r"[+-][^+-]+", rest)) != rest:
        raise ParseError(f"unknown field {text!r}")
    return QuadraticField(u, v)


def field_of(*xs) -> Field:
    """The field of the given scalars (rationals if none carries a field)."""
    found = None
    for x in xs:
        f = getattr(x, "field", None)
        if f is None:
            continue
        if found is not None and f != found:
            raise FieldMismatchError(f"{found.spec()} vs {f.spec()}")
        found = f
    return found if found is not None else QQ


def scalar_arith(a, b, op: str):
    """Apply ``op`` in {add, mul, inv, neg, eq} to scalars of one field."""
    field_of(a, b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if not isinstance(a, int) else Fraction(1, a)
    if op == "eq":
        return a == b
    raise ValueError(f"unknown op {op!r}")
