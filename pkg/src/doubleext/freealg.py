"""Noncommutative polynomials in x1, x2, y1, y2.

Words are tuples of generator indices (x1=0, x2=1, y1=2, y2=3), compared
deg-lex: shorter words are smaller, equal lengths compare lexicographically
with x1 < x2 < y1 < y2.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from .exactnum import QQ, Field, ModElement, QuadraticElement, field_of

GENS = ("x1", "x2", "y1", "y2")
X1, X2, Y1, Y2 = range(4)
GEN_INDEX = {name: i for i, name in enumerate(GENS)}

Word = Tuple[int, ...]


def word_key(w: Word):
    return (len(w), w)


def word_str(w: Word) -> str:
    if not w:
        return "1"
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        n = j - i
        out.append(GENS[w[i]] if n == 1 else f"{GENS[w[i]]}^{n}")
        i = j
    return "*".join(out)


def parse_word(text: str) -> Word:
    text = text.replace(" ", "")
    if text in ("", "1"):
        return ()
    out = []
    for factor in text.split("*"):
        m = re.fullmatch(r"([xy][12])(?:\^(\d+))?", factor)
        if not m:
            raise ValueError(f"bad word factor {factor!r}")
        out.extend([GEN_INDEX[m.group(1)]] * int(m.group(2) or 1))
    return tuple(out)


def words(n: int, gens: Iterable[int] = range(4)):
    """All words of length n over ``gens``, in increasing order."""
    gens = sorted(gens)
    out = [()]
    for _ in range(n):
        out = [w + (g,) for w in out for g in gens]
    return out


class NcPoly:
    """A finite map word -> nonzero scalar.  Treat instances as immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Word, object] | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c != 0}

    @classmethod
    def gen(cls, name):
        i = GEN_INDEX[name] if isinstance(name, str) else name
        return cls({(i,): Fraction(1)})

    @classmethod
    def word(cls, w: Word, coef=Fraction(1)):
        return cls({tuple(w): coef})

    @classmethod
    def const(cls, c):
        return cls({(): c})

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, NcPoly):
            other = NcPoly.const(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s == 0:
                out.pop(w, None)
            else:
                out[w] = s
        return _raw(out)

    __radd__ = __add__

    def __neg__(self):
        return _raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NcPoly):
            other = NcPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if c == 0:
            return NcPoly()
        return _raw({w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NcPoly):
            return self.scale(other)
        out: Dict[Word, object] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                s = out.get(w, 0) + a * b
                if s == 0:
                    out.pop(w, None)
                else:
                    out[w] = s
        return _raw(out)

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, n: int):
        out = NcPoly.const(Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def coefficient(self, w: Word):
        return self.terms.get(tuple(w), 0)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        w = max(self.terms, key=word_key)
        return w, self.terms[w]

    def degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(len(w) for w in self.terms)

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self.terms}) <= 1

    def monic(self):
        _, c = self.leading_term()
        return self.scale(1 / c) if c != 1 else self

    @property
    def field(self) -> Field:
        return field_of(*self.terms.values())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]), reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"NcPoly({format_poly(self)!r})"


def _raw(terms) -> NcPoly:
    p = NcPoly.__new__(NcPoly)
    p.terms = terms
    return p


def _coef_str(c) -> Tuple[str, str]:
    """Split a coefficient into (sign, magnitude text); text '' means 1."""
    if isinstance(c, ModElement):
        return "+", "" if c.r == 1 else str(c.r)
    if isinstance(c, QuadraticElement):
        if c.c1 == 0:
            c = c.c0
        else:
            return "+", "(" + c.field.format(c) + ")"
    c = Fraction(c)
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    if mag == 1:
        return sign, ""
    return sign, QQ.format(mag)


def format_poly(p: NcPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for i, (w, c) in enumerate(p.sorted_terms()):
        sign, mag = _coef_str(c)
        if not w:
            body = mag or "1"
        else:
            body = (mag + "*" if mag else "") + word_str(w)
        if i == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def _split_terms(s: str):
    depth, start, out = 0, 0, []
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start:
            # a sign directly after '*', '/' or '^' belongs to the factor
            if s[i - 1] not in "*/^(":
                out.append(s[start:i])
                start = i
    out.append(s[start:])
    return [t for t in out if t]


def parse_poly(text: str, field: Field = QQ) -> NcPoly:
    """Parse e.g. ``y2*x1 - 3/2*x1*y2 + (1+a)*y1^2``.

    Coefficients are read with ``field.parse``; compound coefficients must be
    parenthesized.
    """
    s = text.replace(" ", "")
    if s in ("", "0"):
        return NcPoly()
    out = NcPoly()
    for term in _split_terms(s):
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        coef = field.one()
        word: list = []
        for factor in _split_factors(term):
            m = re.fullmatch(r"([xy][12])(?:\^(\d+))?", factor)
            if m:
                word.extend([GEN_INDEX[m.group(1)]] * int(m.group(2) or 1))
            else:
                if word:
                    raise ValueError(f"coefficient after generators in {term!r}")
                coef = coef * field.parse(factor.strip("()") if factor.startswith("(") else factor)
        c = coef if sign == 1 else -coef
        out = out + NcPoly({tuple(word): c})
    return out


def _split_factors(term: str):
    depth, start, out = 0, 0, []
    for i, ch in enumerate(term):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(term[start:i])
            start = i + 1
    out.append(term[start:])
    if any(f == "" for f in out):
        raise ValueError(f"bad term {term!r}")
    return out


def poly_arith(p: NcPoly, q, op: str) -> NcPoly:
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "scale":
        return q * p if isinstance(q, NcPoly) else p.scale(q)
    raise ValueError(f"unknown op {op!r}")


def x(i: int) -> NcPoly:
    return NcPoly.gen(i - 1)


def y(i: int) -> NcPoly:
    return NcPoly.gen(i + 1)
