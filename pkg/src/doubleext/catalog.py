"""The 26 families of non-Ore trimmed double extensions, as parametric data.

Entries are small arithmetic expressions in the family parameters
(h, p, q, f, g) evaluated exactly in the specialization's field.  Families
with an algebraic constant (p^2+1=0, p^2+p+1=0, q^2+1=0) are specialized
over the quadratic field generated by that constant.
"""
from __future__ import annotations

import ast
import operator
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .dext import DEData, DataError
from .exactnum import QQ, Field, QuadraticField, parse_field
from .freealg import NcPoly, parse_poly

SELFDUAL = "SELFDUAL"
NONE = "NONE"


class ConstraintError(DataError):
    pass


# ---------------------------------------------------------------- expressions

_BIN = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def evaluate(expr: str, env: Dict[str, object], fld: Field = QQ):
    """Evaluate a small arithmetic expression (``^`` is a power) exactly."""
    tree = ast.parse(expr.replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return fld.coerce(node.value)
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise ConstraintError(f"missing parameter {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BIN:
            return _BIN[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            e = node.right
            if not (isinstance(e, ast.Constant) and isinstance(e.value, int)):
                raise ValueError(f"non-integer exponent in {expr!r}")
            return ev(node.left) ** e.value
        raise ValueError(f"unsupported expression {expr!r}")

    return ev(tree)


def _fill(text: str, env: Dict[str, object], fld: Field) -> str:
    """Substitute parameter values into a polynomial expression as parenthesized scalars."""
    import re

    def rep(m):
        name = m.group(0)
        return "(" + fld.format(env[name]).replace(" ", "") + ")"

    return re.sub(r"\b[hpqfg]\b", rep, text)


# ---------------------------------------------------------------- records

@dataclass(frozen=True)
class Constraint:
    kind: str  # "zero" or "nonzero"
    expr: str
    label: str

    def holds(self, env, fld) -> bool:
        v = evaluate(self.expr, env, fld)
        return (v == 0) if self.kind == "zero" else (v != 0)


@dataclass(frozen=True)
class NormalClaim:
    """z normalizes span(W); identities are exact equalities in the algebra."""
    element: str
    W: str  # "x", "y", "x2", "y2" or "gens"
    identities: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Witness:
    """dual(family) ~ partner via X' = Bx X, Y' = By Y and a twist by h.

    Entries are expressions in the family parameters and, when
    ``needs_sqrt`` is set, in ``s`` with s^2 equal to that expression.
    """
    partner_params: Tuple[Tuple[str, str], ...]
    Bx: Tuple[Tuple[str, str], Tuple[str, str]]
    By: Tuple[Tuple[str, str], Tuple[str, str]]
    h: str = "1"
    needs_sqrt: Optional[str] = None


@dataclass(frozen=True)
class Specialization:
    field: str
    params: Tuple[Tuple[str, str], ...]

    def field_obj(self) -> Field:
        return parse_field(self.field)

    def values(self) -> Dict[str, object]:
        fld = self.field_obj()
        return {k: fld.parse(v) for k, v in self.params}

    def label(self) -> str:
        return ",".join(f"{k}={v}" for k, v in self.params)


@dataclass(frozen=True)
class FamilyRecord:
    name: str
    symbol: str
    params: Tuple[str, ...]
    sigma: Tuple[Tuple[str, ...], ...]
    P: Tuple[str, str]
    Q: Tuple[str, str]
    detsigma: Tuple[Tuple[str, str], Tuple[str, str]]
    constraints: Tuple[Constraint, ...] = ()
    minpoly: Optional[str] = None  # field needed for the algebraic constant
    printed_M: Optional[Tuple[Tuple[str, ...], ...]] = None
    duality: str = NONE
    ore_flags: Tuple[str, ...] = ()
    normal_claims: Tuple[NormalClaim, ...] = ()
    specializations: Tuple[Specialization, ...] = ()
    witness: Optional[Witness] = None
    notes: Tuple[str, ...] = ()

    def check_params(self, env: Dict[str, object], fld: Field):
        missing = [p for p in self.params if p not in env]
        if missing:
            raise ConstraintError(f"{self.name}: missing parameter(s) {', '.join(missing)}")
        extra = [p for p in env if p not in self.params]
        if extra:
            raise ConstraintError(f"{self.name}: unknown parameter(s) {', '.join(extra)}")
        for c in self.constraints:
            if not c.holds(env, fld):
                if c.kind == "zero":
                    raise ConstraintError(
                        f"{self.name}: constraint {c.label} violated"
                        f" (the field {fld.spec()} must contain the required constant)")
                raise ConstraintError(f"{self.name}: constraint {c.label} violated")


def _g(rows: str) -> Tuple[Tuple[str, ...], ...]:
    """Parse a matrix written as ';'-separated rows of ','-separated entries."""
    return tuple(tuple(e.strip() for e in r.split(",")) for r in rows.split(";"))


def _sp(fld: str, **kw) -> Specialization:
    return Specialization(fld, tuple((k, str(v)) for k, v in kw.items()))


def _w(partner, Bx, By, h="1", sqrt=None) -> Witness:
    pp = tuple(tuple(kv.split("=", 1)) for kv in partner.split())
    return Witness(pp, _g(Bx), _g(By), h, sqrt)


def _nz(expr, label):
    return Constraint("nonzero", expr, label)


def _eq(expr, label):
    return Constraint("zero", expr, label)


H0 = _nz("h", "h ≠ 0")
I2 = "Q(a^2+1)"
W3 = "Q(a^2+a+1)"


def _h(rows: str) -> Tuple[Tuple[str, ...], ...]:
    """Entries multiplied by h."""
    out = []
    for r in _g(rows):
        out.append(tuple("0" if e == "0" else f"h*({e})" for e in r))
    return tuple(out)


FAMILIES: Dict[str, FamilyRecord] = {}


def _add(rec: FamilyRecord):
    FAMILIES[rec.name] = rec


_add(FamilyRecord(
    "A", "𝔸", ("h",), _h("1,0,0,0; 0,1,1,0; 0,0,1,0; 0,-2,-1,1"), ("1", "1"), ("1", "0"),
    _g("h^2,0; 0,h^2"), (H0,),
    printed_M=_h("1,0,0,0; 0,1,0,0; 0,1,1,0; 0,-1,-2,1"),
    ore_flags=("M12=0",),
    specializations=(_sp("Q", h=1), _sp("Q", h=2), _sp("Q", h=-3))))

_add(FamilyRecord(
    "B", "𝔹", ("h", "p"), _h("0,0,0,1; 0,0,1,0; 0,-1,0,0; 1,0,0,0"), ("p", "0"), ("p", "0"),
    _g("p*h^2,0; 0,-p*h^2"), (H0, _eq("p^2+1", "p^2+1 = 0")), minpoly=I2,
    printed_M=_h("0,0,0,1; 0,0,-1,0; 0,1,0,0; 1,0,0,0"),
    duality=SELFDUAL,
    normal_claims=(NormalClaim("y1", "x2"), NormalClaim("y2", "x2")),
    witness=_w("h=h p=p", "0,1; 1,0", "0,1; 1,0"),
    specializations=(_sp(I2, h=1, p="a"), _sp(I2, h=1, p="-a"), _sp(I2, h=2, p="a"))))

_add(FamilyRecord(
    "C", "ℂ", ("h", "p"), _h("-1,p^2,1,-p; -p,1,1,-p; -p,-2*p^2,p,-p; -p,p^2,1,-1"), ("p", "0"), ("p", "0"),
    _g("-3*p*h^2,0; 0,-3*h^2"), (H0, _eq("p^2+p+1", "p^2+p+1 = 0")), minpoly=W3,
    printed_M=_h("-1,1,p^2,-p; -p,p,-2*p^2,-p; -p,1,1,-p; -p,1,p^2,-1"),
    duality=SELFDUAL,
    normal_claims=(
        NormalClaim("y1^2*y2", "gens", (
            "y1^2*y2*(x1-p*x2) = h^3*(p-1)^2*(1-p^2)*(x1-p*x2)*y1^2*y2",
            "y1^2*y2*(x1-x2) = h^3*(p-1)^2*(1-p^2)*(x1-x2)*y1^2*y2")),
        NormalClaim("y1^3-y2^3", "gens", (
            "(y1^3-y2^3)*x2 = h^3*(1-p^2)^3*x2*(y1^3-y2^3)",
            "(y1-y2)^3 = y1^3-y2^3",
            "(y1-p*y2)^3 = y1^3-y2^3"))),
    witness=_w("h=h p=p", "0,1; 1,0", "0,1; 1,0"),
    specializations=(_sp(W3, h=1, p="a"), _sp(W3, h=1, p="-1-a"), _sp(W3, h=3, p="a"))))

_add(FamilyRecord(
    "D", "𝔻", ("h", "p"), _h("-p,0,0,0; 0,-p^2,1,0; 0,0,p,0; 1,0,0,1"), ("p", "0"), ("-1", "0"),
    _g("-p^2*h^2,0; 0,-p^2*h^2"), (H0, _nz("p", "p ≠ 0")),
    printed_M=_h("-p,0,0,0; 0,p,0,0; 0,1,-p^2,0; 1,0,0,1"),
    ore_flags=("M12=0",),
    specializations=(_sp("Q", h=1, p=2), _sp("Q", h=1, p=1), _sp("Q", h=2, p=-3)),
    notes=("p = 1 gives the special case with P = (1,0) and Sigma = h(-1,0,0,0; 0,-1,1,0; 0,0,1,0; 1,0,0,1)",)))

_add(FamilyRecord(
    "E", "𝔼", ("h", "p"), _h("0,0,1,1; 0,0,1,-1; -1,1,0,0; 1,1,0,0"), ("p", "0"), ("-1", "0"),
    _g("0,2*p*h^2; -2*p*h^2,0"), (H0, _eq("p^2+1", "p^2+1 = 0")), minpoly=I2,
    printed_M=_h("0,1,0,1; -1,0,1,0; 0,1,0,-1; 1,0,1,0"),
    duality="J",
    normal_claims=(NormalClaim("y1", "x2"), NormalClaim("y2", "x2")),
    witness=_w("h=h q=p", "0,-1; 1,0", "1,0; 0,-1"),
    specializations=(_sp(I2, h=1, p="a"), _sp(I2, h=1, p="-a"), _sp(I2, h=2, p="a"))))

_add(FamilyRecord(
    "F", "𝔽", ("h", "p"), _h("-1,-p,1,-1; -p,1,1,1; -p,p,p,1; -p,-p,1,-p"), ("p", "0"), ("-1", "0"),
    _g("-2*p*h^2,0; 0,-2*p*h^2"), (H0, _eq("p^2+1", "p^2+1 = 0")), minpoly=I2,
    printed_M=_h("-1,1,-p,-1; -p,p,p,1; -p,1,1,1; -p,1,-p,-p"),
    duality="I",
    normal_claims=(
        NormalClaim("x1*x2", "y", (
            "y1*x1*x2 = -2*p*h^2*x1*x2*y1",
            "y2*x1*x2 = -2*p*h^2*x1*x2*y2")),
        NormalClaim("x1^2+x2^2", "y", (
            "y1*(x1^2+x2^2) = -2*p*h^2*(x1^2+x2^2)*y1",
            "y2*(x1^2+x2^2) = -2*p*h^2*(x1^2+x2^2)*y2")),
        NormalClaim("x1*x2", "y2"),
        NormalClaim("x1^2+x2^2", "y2")),
    witness=_w("h=h q=p", "0,1; 1,0", "0,1; 1,0"),
    specializations=(_sp(I2, h=1, p="a"), _sp(I2, h=1, p="-a"), _sp(I2, h=2, p="a"))))

_add(FamilyRecord(
    "G", "𝔾", ("h", "p", "f"), _h("p,0,0,0; p,p^2,1,0; 0,0,p,0; f,0,-1,1"), ("p", "0"), ("1", "0"),
    _g("p^2*h^2,0; 0,p^2*h^2"), (H0, _nz("p", "p ≠ 0"), _nz("f", "f ≠ 0")),
    printed_M=_h("p,0,0,0; 0,p,0,0; p,1,p^2,0; f,-1,0,1"),
    ore_flags=("M12=0",),
    specializations=(_sp("Q", h=1, p=2, f=1), _sp("Q", h=1, p=-1, f=3), _sp("Q", h=2, p=3, f=-2))))

_add(FamilyRecord(
    "H", "ℍ", ("h", "f"), _h("0,0,1,0; 0,0,f,1; 1,0,0,0; f,1,0,0"), ("-1", "0"), ("1", "1"),
    _g("h^2,0; 2*f*h^2,h^2"), (H0,),
    printed_M=_h("0,1,0,0; 1,0,0,0; 0,f,0,1; f,0,1,0"),
    ore_flags=("M12=0",),
    specializations=(_sp("Q", h=1, f=2), _sp("Q", h=1, f=-1), _sp("Q", h=2, f=3))))

_add(FamilyRecord(
    "I", "𝕀", ("h", "q"), _h("-q,-q,1,-q; 1,1,1,-q; 1,q,q,-q; -1,-q,1,-1"), ("-1", "0"), ("q", "0"),
    _g("2*h^2,0; 0,-2*h^2"), (H0, _eq("q^2+1", "q^2+1 = 0")), minpoly=I2,
    printed_M=_h("-q,1,-q,-q; 1,q,q,-q; 1,1,1,-q; -1,1,-q,-1"),
    duality="F",
    normal_claims=(
        NormalClaim("y1*y2", "x", (
            "y1*y2*x1 = -h^2*(1+q)^2*x1*y1*y2",
            "y1*y2*x2 = -h^2*(1+q)^2*x2*y1*y2")),
        NormalClaim("y1^2+y2^2", "x", (
            "(y1^2+y2^2)*x1 = -h^2*(1+q)^2*x1*(y1^2+y2^2)",
            "(y1^2+y2^2)*x2 = -h^2*(1+q)^2*x2*(y1^2+y2^2)")),
        NormalClaim("y1*y2", "x2"),
        NormalClaim("y1^2+y2^2", "x2")),
    witness=_w("h=h p=q", "0,1; 1,0", "0,1; 1,0"),
    specializations=(_sp(I2, h=1, q="a"), _sp(I2, h=1, q="-a"), _sp(I2, h=2, q="a"))))

_add(FamilyRecord(
    "J", "𝕁", ("h", "q"), _h("0,1,0,1; -1,0,1,0; 0,1,0,-1; 1,0,1,0"), ("-1", "0"), ("q", "0"),
    _g("2*h^2,0; 0,2*h^2"), (H0, _eq("q^2+1", "q^2+1 = 0")), minpoly=I2,
    printed_M=_h("0,0,1,1; 0,0,1,-1; -1,1,0,0; 1,1,0,0"),
    duality="E",
    normal_claims=(NormalClaim("x1", "y2"), NormalClaim("x2", "y2")),
    witness=_w("h=h p=q", "0,1; 1,0", "0,1; 1,0"),
    specializations=(_sp(I2, h=1, q="a"), _sp(I2, h=1, q="-a"), _sp(I2, h=2, q="a")),
    notes=("the printed M omits the factor h",)))

_add(FamilyRecord(
    "K", "𝕂", ("h", "q", "f"), _h("1,0,0,0; 0,0,0,1; 0,0,1,0; 0,f,0,0"), ("-1", "0"), ("q", "0"),
    _g("h^2,0; 0,f*h^2"), (H0, _nz("f", "f ≠ 0"), _nz("q", "q ≠ 0")),
    printed_M=_h("1,0,0,0; 0,1,0,0; 0,0,0,1; 0,0,f,0"),
    ore_flags=("M12=0", "M21=0,q11=0"),
    specializations=(_sp("Q", h=1, q=2, f=2), _sp("Q", h=1, q=-1, f=3), _sp("Q", h=2, q=1, f=-5))))

_add(FamilyRecord(
    "L", "𝕃", ("h", "q", "f"), _h("0,0,f,0; 0,0,0,1; f,0,0,0; 0,1,0,0"), ("-1", "0"), ("q", "0"),
    _g("f^2*h^2,0; 0,h^2"), (H0, _nz("f", "f ≠ 0"), _nz("q", "q ≠ 0")),
    printed_M=_h("0,f,0,0; f,0,0,0; 0,0,0,1; 0,0,1,0"),
    ore_flags=("M12=0", "M21=0,q11=0"),
    specializations=(_sp("Q", h=1, q=2, f=2), _sp("Q", h=1, q=-1, f=3), _sp("Q", h=2, q=1, f=-5))))

_add(FamilyRecord(
    "M", "𝕄", ("h", "f"), _h("0,1,1,0; f,0,0,-1; 1,0,0,-1; 0,-1,-f,0"), ("-1", "0"), ("-1", "0"),
    _g("(1-f)*h^2,0; 0,(1-f)*h^2"), (H0, _nz("f-1", "f ≠ 1")),
    printed_M=_h("0,1,1,0; 1,0,0,-1; f,0,0,-1; 0,-f,-1,0"),
    duality=SELFDUAL,
    normal_claims=(NormalClaim("f*x1^2-x2^2", "gens", (
        "y1*(f*x1^2-x2^2) = h^2*(1-f)*(f*x1^2-x2^2)*y1",
        "y2*(f*x1^2-x2^2) = h^2*(1-f)*(f*x1^2-x2^2)*y2")),),
    witness=_w("h=h f=1/f", "1,0; 0,1/s", "1,0; 0,1/s", "1/s", "f"),
    specializations=(_sp("Q", h=1, f=2), _sp("Q", h=1, f=3), _sp("Q", h=2, f=-5))))

_add(FamilyRecord(
    "N", "ℕ", ("f", "g"), _g("0,-g,0,f; g,0,f,0; 0,f,0,-g; f,0,g,0"), ("-1", "0"), ("-1", "0"),
    _g("f^2-g^2,0; 0,f^2-g^2"), (_nz("f^2-g^2", "f^2 ≠ g^2"),),
    printed_M=_g("0,0,-g,f; 0,0,f,-g; g,f,0,0; f,g,0,0"),
    duality="P",
    normal_claims=(NormalClaim("x1", "y2"), NormalClaim("x2", "y2")),
    witness=_w("h=g f=f^2/g^2", "1,0; 0,-g/f", "1,0; 0,-s", "s", "-1"),
    specializations=(_sp("Q", f=2, g=3), _sp("Q", f=3, g=7), _sp("Q", f=-5, g=3)),
    notes=("Sigma carries no twist factor h; twists are applied externally",)))

_add(FamilyRecord(
    "O", "𝕆", ("h", "f"), _h("1,0,0,f; 0,-1,1,0; 0,f,-1,0; 1,0,0,1"), ("-1", "0"), ("-1", "0"),
    _g("(f-1)*h^2,0; 0,(f-1)*h^2"), (H0, _nz("f-1", "f ≠ 1")),
    printed_M=_h("1,0,0,f; 0,-1,f,0; 0,1,-1,0; 1,0,0,1"),
    duality=SELFDUAL,
    normal_claims=(NormalClaim("x1^2-f*x2^2", "gens", (
        "y1*(x1^2-f*x2^2) = h^2*(1-f)*(x1^2-f*x2^2)*y1",
        "y2*(x1^2-f*x2^2) = h^2*(1-f)*(x1^2-f*x2^2)*y2")),),
    witness=_w("h=h f=f", "1,0; 0,1/s", "1,0; 0,s", "1", "f"),
    specializations=(_sp("Q", h=1, f=2), _sp("Q", h=1, f=3), _sp("Q", h=2, f=-5))))

_add(FamilyRecord(
    "P", "ℙ", ("h", "f"), _h("0,0,1,f; 0,0,1,1; 1,-f,0,0; -1,1,0,0"), ("-1", "0"), ("-1", "0"),
    _g("(1-f)*h^2,0; 0,(1-f)*h^2"), (H0, _nz("f-1", "f ≠ 1")),
    printed_M=_h("0,1,0,f; 1,0,-f,0; 0,1,0,1; -1,0,1,0"),
    duality="N",
    normal_claims=(NormalClaim("y1", "x2"), NormalClaim("y2", "x2")),
    specializations=(_sp("Q", h=1, f=2), _sp("Q", h=1, f=3), _sp("Q", h=2, f=-5))))

_add(FamilyRecord(
    "Q", "ℚ", ("h",), _h("0,0,1,0; 1,1,1,0; -1,0,0,0; 1,0,-1,1"), ("-1", "0"), ("-1", "0"),
    _g("-h^2,0; 0,h^2"), (H0,),
    printed_M=_h("0,1,0,0; -1,0,0,0; 1,1,1,0; 1,-1,0,1"),
    ore_flags=("M12=0",),
    specializations=(_sp("Q", h=1), _sp("Q", h=2), _sp("Q", h=-3))))

_add(FamilyRecord(
    "R", "ℝ", ("h",), _h("1,1,1,0; 0,0,1,0; 0,1,0,0; 0,-1,-1,1"), ("-1", "0"), ("-1", "0"),
    _g("0,h^2; -h^2,0"), (H0,),
    printed_M=_h("1,1,1,0; 0,0,1,0; 0,1,0,0; 0,-1,-1,1"),
    duality=SELFDUAL,
    witness=_w("h=h", "1,0; 0,1", "1,0; 0,1"),
    specializations=(_sp("Q", h=1), _sp("Q", h=2), _sp("Q", h=-3))))

_add(FamilyRecord(
    "S", "𝕊", ("h",), _h("-1,1,1,1; 1,-1,1,1; 1,1,-1,1; 1,1,1,-1"), ("-1", "0"), ("-1", "0"),
    _g("4*h^2,0; 0,4*h^2"), (H0,),
    printed_M=_h("-1,1,1,1; 1,-1,1,1; 1,1,-1,1; 1,1,1,-1"),
    duality=SELFDUAL,
    normal_claims=(NormalClaim("x1+x2", "y"), NormalClaim("x1-x2", "y")),
    witness=_w("h=h", "1,0; 0,1", "1,0; 0,1"),
    specializations=(_sp("Q", h=1), _sp("Q", h=2), _sp("Q", h=-3))))

_add(FamilyRecord(
    "T", "𝕋", ("h",), _h("-1,1,1,1; 1,-1,1,1; 1,1,1,-1; 1,1,-1,1"), ("-1", "0"), ("-1", "0"),
    _g("0,4*h^2; 4*h^2,0"), (H0,),
    printed_M=_h("-1,1,1,1; 1,1,1,-1; 1,1,-1,1; 1,-1,1,1"),
    duality="U",
    normal_claims=(
        NormalClaim("x1+x2", "y", (
            "y1*(x1+x2) = 2*h*(x1+x2)*y2",
            "y2*(x1+x2) = 2*h*(x1+x2)*y1")),
        NormalClaim("x1-x2", "y")),
    witness=_w("h=h", "1,0; 0,1", "1,0; 0,1"),
    specializations=(_sp("Q", h=1), _sp("Q", h=2), _sp("Q", h=-3))))

_add(FamilyRecord(
    "U", "𝕌", ("h",), _h("-1,1,1,1; 1,1,1,-1; 1,1,-1,1; 1,-1,1,1"), ("-1", "0"), ("-1", "0"),
    _g("4*h^2,0; 0,4*h^2"), (H0,),
    printed_M=_h("-1,1,1,1; 1,-1,1,1; 1,1,1,-1; 1,1,-1,1"),
    duality="T",
    normal_claims=(
        NormalClaim("y1+y2", "x", (
            "(y1+y2)*x1 = 2*h*x2*(y1+y2)",
            "(y1+y2)*x2 = 2*h*x1*(y1+y2)")),
        NormalClaim("y1-y2", "x", (
            "(y1-y2)*x1 = -2*h*x1*(y1-y2)",
            "(y1-y2)*x2 = 2*h*x2*(y1-y2)"))),
    witness=_w("h=h", "1,0; 0,1", "1,0; 0,1"),
    specializations=(_sp("Q", h=1), _sp("Q", h=2), _sp("Q", h=-3))))

_add(FamilyRecord(
    "V", "𝕍", ("h",), _h("0,1,1,0; 0,1,0,0; -1,1,0,0; 0,0,0,1"), ("-1", "0"), ("1", "0"),
    _g("-h^2,h^2; 0,h^2"), (H0,),
    printed_M=_h("0,1,1,0; -1,0,1,0; 0,0,1,0; 0,0,0,1"),
    ore_flags=("M21=0,q11=0",),
    specializations=(_sp("Q", h=1), _sp("Q", h=2), _sp("Q", h=-3))))

_add(FamilyRecord(
    "W", "𝕎", ("h", "f"), _h("0,f,1,0; 1,0,0,-1; 1,0,0,f; 0,-1,1,0"), ("-1", "0"), ("1", "0"),
    _g("(f+1)*h^2,0; 0,(f+1)*h^2"), (H0, _nz("f+1", "f ≠ -1")),
    printed_M=_h("0,1,f,0; 1,0,0,f; 1,0,0,-1; 0,1,-1,0"),
    duality="Z",
    normal_claims=(
        NormalClaim("y1+y2", "x", (
            "(y1+y2)*x1 = h*(x1+f*x2)*(y1+y2)",
            "(y1+y2)*x2 = h*(x1-x2)*(y1+y2)")),
        NormalClaim("y1-y2", "x", (
            "(y1-y2)*x1 = h*(f*x2-x1)*(y1-y2)",
            "(y1-y2)*x2 = h*(x1+x2)*(y1-y2)"))),
    witness=_w("h=h f=1/f", "1,0; 0,1", "1,s; 1/s,-1", "1/s", "f"),
    specializations=(_sp("Q", h=1, f=2), _sp("Q", h=1, f=3), _sp("Q", h=2, f=-3))))

_add(FamilyRecord(
    "X", "𝕏", ("h",), _h("0,0,1,0; 0,0,1,1; 1,0,0,0; 1,1,0,0"), ("-1", "0"), ("1", "0"),
    _g("h^2,0; 2*h^2,h^2"), (H0,),
    printed_M=_h("0,1,0,0; 1,0,0,0; 1,1,0,1; 1,0,1,0"),
    ore_flags=("M12=0",),
    specializations=(_sp("Q", h=1), _sp("Q", h=2), _sp("Q", h=-3)),
    notes=("the printed M has a 1 in row 3, column 1 where the rearranged Sigma has 0",)))

_add(FamilyRecord(
    "Y", "𝕐", ("h", "f"), _h("1,0,0,0; f,-1,1,0; 0,0,1,0; 1,0,f,-1"), ("-1", "0"), ("1", "0"),
    _g("h^2,0; 0,h^2"), (H0,),
    printed_M=_h("1,0,0,0; 0,1,0,0; f,1,-1,0; 1,f,0,-1"),
    ore_flags=("M12=0",),
    specializations=(_sp("Q", h=1, f=2), _sp("Q", h=1, f=-1), _sp("Q", h=2, f=3))))

_add(FamilyRecord(
    "Z", "ℤ", ("h", "f"), _h("1,0,0,1; 0,1,1,0; 0,f,-1,0; f,0,0,-1"), ("1", "0"), ("-1", "0"),
    _g("-(f+1)*h^2,0; 0,-(f+1)*h^2"), (H0, _nz("f*(1+f)", "f(1+f) ≠ 0")),
    printed_M=_h("1,0,0,1; 0,-1,f,0; 0,1,1,0; f,0,0,-1"),
    duality="W",
    normal_claims=(
        NormalClaim("x1+x2", "y", (
            "y1*(x1+x2) = h*(x1+x2)*(y1+y2)",
            "y2*(x1+x2) = h*(x1+x2)*(f*y1-y2)")),
        NormalClaim("x1-x2", "y", (
            "y1*(x1-x2) = h*(x1-x2)*(y1-y2)",
            "y2*(x1-x2) = h*(x1-x2)*(-f*y1-y2)"))),
    witness=_w("h=h f=1/f", "1,1/s; s,-1", "1,0; 0,1", "1/s", "f"),
    specializations=(_sp("Q", h=1, f=2), _sp("Q", h=1, f=4), _sp("Q", h=2, f=-3)),
    notes=("the printed relations for y1*x1 and y2*x2 differ from the expansion of Sigma "
           "(expansion: y1*x1 = x1*y1 + x2*y2 and y2*x2 = f*x1*y1 - x2*y2); Sigma is used",)))


# ---------------------------------------------------------------- operations

def get(name: str) -> FamilyRecord:
    key = name.strip().upper()
    for rec in FAMILIES.values():
        if rec.symbol == name.strip():
            return rec
    if key not in FAMILIES:
        raise KeyError(f"unknown family {name!r}")
    return FAMILIES[key]


def family_names() -> List[str]:
    return sorted(FAMILIES)


def _env(rec: FamilyRecord, params: Dict[str, object], fld: Field):
    return {k: fld.coerce(v) if not isinstance(v, str) else fld.parse(v) for k, v in params.items()}


def instantiate(name: str, params: Dict[str, object], fld: Optional[Field] = None) -> DEData:
    rec = get(name)
    if fld is None:
        fld = parse_field(rec.minpoly) if rec.minpoly else QQ
    env = _env(rec, params, fld)
    rec.check_params(env, fld)
    ev = lambda e: evaluate(e, env, fld)
    sigma = [[ev(e) for e in row] for row in rec.sigma]
    return DEData.make(tuple(ev(e) for e in rec.Q), tuple(ev(e) for e in rec.P), sigma, fld)


def default_specializations(name: str) -> List[Specialization]:
    return list(get(name).specializations)


def instantiate_spec(name: str, spec: Specialization) -> DEData:
    fld = spec.field_obj()
    return instantiate(name, spec.values(), fld)


def expected_detsigma(name: str, params: Dict[str, object], fld: Field):
    rec = get(name)
    env = _env(rec, params, fld)
    return [[evaluate(e, env, fld) for e in row] for row in rec.detsigma]


def printed_m(name: str, params: Dict[str, object], fld: Field):
    rec = get(name)
    env = _env(rec, params, fld)
    return tuple(tuple(evaluate(e, env, fld) for e in row) for row in rec.printed_M)


def claim_polys(claim: NormalClaim, params: Dict[str, object], fld: Field):
    """(z, [(lhs, rhs), ...]) as polynomials over ``fld``."""
    z = parse_poly(_fill(claim.element, params, fld), fld)
    ids = []
    for text in claim.identities:
        lhs, rhs = text.split("=")
        ids.append((_expand(lhs, params, fld), _expand(rhs, params, fld)))
    return z, ids


def _expand(text: str, params, fld) -> NcPoly:
    """Polynomial expressions with parentheses and products of sums."""
    text = _fill(text.strip(), params, fld)
    return _ExprParser(text, fld).parse()


class _ExprParser:
    """Recursive-descent parser for sums/products/powers of generators and scalars."""

    def __init__(self, text, fld):
        self.s = text.replace(" ", "")
        self.i = 0
        self.fld = fld

    def parse(self) -> NcPoly:
        v = self.sum()
        if self.i != len(self.s):
            raise ValueError(f"trailing input in {self.s!r}")
        return v

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def sum(self):
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        v = self.product().scale(self.fld.coerce(sign))
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.i += 1
            t = self.product()
            v = v + t if op == "+" else v - t
        return v

    def product(self):
        v = self.power()
        while self.peek() == "*":
            self.i += 1
            v = v * self.power()
        return v

    def power(self):
        v = self.atom()
        if self.peek() == "^":
            self.i += 1
            j = self.i
            while self.peek().isdigit():
                self.i += 1
            v = v ** int(self.s[j:self.i])
        return v

    def atom(self):
        ch = self.peek()
        if ch == "(":
            # a parenthesized scalar like (2+5a) or a parenthesized polynomial
            depth, j = 0, self.i
            while j < len(self.s):
                if self.s[j] == "(":
                    depth += 1
                elif self.s[j] == ")":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            inner = self.s[self.i + 1:j]
            self.i = j + 1
            if not any(c in inner for c in "xy"):
                try:
                    return NcPoly.const(self.fld.parse(inner))
                except ValueError:
                    pass
            return _ExprParser(inner, self.fld).parse()
        if ch in "xy":
            name = self.s[self.i:self.i + 2]
            self.i += 2
            return parse_poly(name, self.fld)
        if ch == "-":
            self.i += 1
            return -self.atom()
        j = self.i
        while self.peek() and (self.peek().isdigit() or self.peek() in "/a"):
            self.i += 1
        if j == self.i:
            raise ValueError(f"unexpected {ch!r} in {self.s!r}")
        return NcPoly.const(self.fld.parse(self.s[j:self.i]))


def duality_pairs() -> List[Tuple[str, str]]:
    out = set()
    for rec in FAMILIES.values():
        if rec.duality not in (NONE, SELFDUAL):
            out.add(tuple(sorted((rec.name, rec.duality))))
    return sorted(out)


def selfdual() -> List[str]:
    return sorted(r.name for r in FAMILIES.values() if r.duality == SELFDUAL)


def export_de(name: str, spec: Specialization) -> str:
    rec = get(name)
    d = instantiate_spec(name, spec)
    return f"# {rec.symbol} at {spec.label()}\n" + d.to_text()


# ---------------------------------------------------------------- duality witnesses

def partner_of(name: str) -> Optional[str]:
    rec = get(name)
    if rec.duality == SELFDUAL:
        return rec.name
    return None if rec.duality == NONE else rec.duality


@dataclass
class WitnessResult:
    family: str
    partner: str
    params: str
    field: str
    ok: bool
    detail: str = ""


def _sqrt_field(v, fld: Field):
    """(field containing a square root of v, that root)."""
    from .exactnum import QuadraticField, _rational_sqrt
    if fld is not QQ:
        raise ConstraintError(f"square root of {fld.format(v)} needs a second extension of {fld.spec()}")
    r = _rational_sqrt(Fraction(v))
    if r is not None:
        return QQ, r
    ext = QuadraticField(0, -Fraction(v))
    return ext, ext.gen


def witness_check(name: str, spec: Optional[Specialization] = None) -> WitnessResult:
    """Certify dual(name at spec) against the partner using the stored witness."""
    from .dext import dual_data, verify_equivalence_witness
    rec = get(name)
    partner = partner_of(rec.name)
    spec = spec or rec.specializations[0]
    if partner is None or rec.witness is None:
        return WitnessResult(rec.name, partner or NONE, spec.label(), spec.field, False, "no stored witness")
    w = rec.witness
    fld = spec.field_obj()
    env = {k: fld.parse(v) for k, v in spec.params}
    if w.needs_sqrt:
        fld, root = _sqrt_field(evaluate(w.needs_sqrt, env, fld), fld)
        env = {k: fld.coerce(v) for k, v in env.items()}
        env["s"] = fld.coerce(root)
    ev = lambda e: evaluate(e, env, fld)
    src = dual_data(instantiate(rec.name, {k: env[k] for k in rec.params}, fld))
    dst = instantiate(partner, {k: ev(e) for k, e in w.partner_params}, fld)
    Bx = [[ev(e) for e in row] for row in w.Bx]
    By = [[ev(e) for e in row] for row in w.By]
    ok = verify_equivalence_witness(src, dst, Bx, By, ev(w.h))
    return WitnessResult(rec.name, partner, spec.label(), fld.spec(), ok)
