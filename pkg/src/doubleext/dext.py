"""Trimmed double-extension data (Q, P, Sigma) and everything computed from it.

Sigma is stored as the 4x4 array with ``sigma[2(i-1)+(s-1)][2(j-1)+(t-1)] = a_ijst``,
so sigma_ij(x_s) = sum_t a_ijst x_t.  The S_uv blocks below are the 2x2
matrices (a_uvst)_{s,t}; composing sigma_fg after sigma_st has coordinate
matrix S_st * S_fg (row vectors of coordinates).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactnum import QQ, Field, ParseError, field_of, parse_field
from .freealg import X1, X2, Y1, Y2, NcPoly, format_poly
from .linalg import identity, mat_add, mat_det, mat_inv, mat_mul, mat_scale

PAIRS = ((1, 1), (1, 2), (2, 1), (2, 2))


class DataError(ValueError):
    """Invalid or non-normalizable double-extension data."""


def _idx(i, s):
    return 2 * (i - 1) + (s - 1)


@dataclass(frozen=True)
class DEData:
    Q: Tuple
    P: Tuple
    sigma: Tuple[Tuple, ...]
    field: Field = QQ

    @classmethod
    def make(cls, Q, P, sigma, field: Optional[Field] = None) -> "DEData":
        if field is None:
            field = field_of(*Q, *P, *[x for row in sigma for x in row])
        c = field.coerce
        if len(sigma) != 4 or any(len(r) != 4 for r in sigma):
            raise DataError("Sigma must be 4x4")
        return cls(tuple(c(x) for x in Q), tuple(c(x) for x in P),
                   tuple(tuple(c(x) for x in row) for row in sigma), field)

    def a(self, i, j, s, t):
        return self.sigma[_idx(i, s)][_idx(j, t)]

    def block(self, i, j):
        """S_ij = (a_ijst)_{s,t}."""
        return [[self.a(i, j, s, t) for t in (1, 2)] for s in (1, 2)]

    @property
    def M(self):
        return m_matrix(self.sigma)

    def with_sigma(self, sigma) -> "DEData":
        return DEData.make(self.Q, self.P, sigma, self.field)

    def key(self):
        return (self.Q, self.P, self.sigma)

    def same(self, other: "DEData") -> bool:
        return self.key() == other.key()

    def to_text(self) -> str:
        f = self.field.format
        lines = [self.field.spec(),
                 f"Q = ({f(self.Q[0])}, {f(self.Q[1])})",
                 f"P = ({f(self.P[0])}, {f(self.P[1])})"]
        for row in self.sigma:
            lines.append("  ".join(f(x).replace(" ", "") for x in row))
        return "\n".join(lines) + "\n"


def m_matrix(sigma):
    """M[(i,s)][(j,t)] = a_{s t i j}; an involution on 4x4 arrays."""
    out = [[None] * 4 for _ in range(4)]
    for i, s, j, t in ((i, s, j, t) for i in (1, 2) for s in (1, 2) for j in (1, 2) for t in (1, 2)):
        out[_idx(i, s)][_idx(j, t)] = sigma[_idx(s, i)][_idx(t, j)]
    return tuple(tuple(r) for r in out)


def parse_de(text: str) -> DEData:
    """Read the ``.de`` format: field line, Q line, P line, four Sigma rows."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if len(lines) != 7:
        raise ParseError(f"expected 7 non-comment lines, found {len(lines)}")
    fld = parse_field(lines[0])
    pairs = {}
    for line in lines[1:3]:
        m = re.fullmatch(r"([QP])\s*=\s*\((.*)\)", line)
        if not m:
            raise ParseError(f"bad parameter line {line!r}")
        vals = [v.strip() for v in _split_top(m.group(2), ",")]
        if len(vals) != 2:
            raise ParseError(f"{m.group(1)} needs two entries")
        pairs[m.group(1)] = tuple(fld.parse(v) for v in vals)
    if set(pairs) != {"Q", "P"}:
        raise ParseError("need one Q line and one P line")
    sigma = []
    for line in lines[3:]:
        row = [t for t in re.split(r"[\s,]+", line) if t]
        if len(row) != 4:
            raise ParseError(f"Sigma row needs 4 entries: {line!r}")
        sigma.append([fld.parse(t) for t in row])
    return DEData.make(pairs["Q"], pairs["P"], sigma, fld)


def _split_top(s, sep):
    depth, start, out = 0, 0, []
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append(s[start:i])
            start = i + 1
    out.append(s[start:])
    return out


# ---------------------------------------------------------------- relations

def synth_relations(d: DEData) -> List[NcPoly]:
    """MR11, MR12, MR21, MR22, NRx, NRy."""
    xs, ys = (X1, X2), (Y1, Y2)
    one = d.field.one()
    rels = []
    for i, s in PAIRS:
        terms = {(ys[i - 1], xs[s - 1]): one}
        for j in (1, 2):
            for t in (1, 2):
                c = d.a(i, j, s, t)
                if c != 0:
                    terms[(xs[t - 1], ys[j - 1])] = -c
        rels.append(NcPoly(terms))
    q12, q11 = d.Q
    p12, p11 = d.P
    rels.append(NcPoly({(X2, X1): one, (X1, X2): -q12, (X1, X1): -q11}))
    rels.append(NcPoly({(Y2, Y1): one, (Y1, Y2): -p12, (Y1, Y1): -p11}))
    return rels


# ---------------------------------------------------------------- System C

@dataclass
class ConstraintReport:
    violations: List[str] = dc_field(default_factory=list)
    det_nonzero: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations and self.det_nonzero


def _c_values(d: DEData, i: int, j: int):
    """The six constraints at (i, j) as lhs - rhs, written out term by term."""
    a = d.a
    q12, q11 = d.Q
    p12, p11 = d.P
    c1 = ((a(i, 1, 2, 1) * a(1, j, 1, 1) + a(i, 2, 2, 1) * a(2, j, 1, 1))
          + q11 * (a(i, 1, 2, 2) * a(1, j, 1, 1) + a(i, 2, 2, 2) * a(2, j, 1, 1))
          - q11 * ((a(i, 1, 1, 1) * a(1, j, 1, 1) + a(i, 2, 1, 1) * a(2, j, 1, 1))
                   + q11 * (a(i, 1, 1, 2) * a(1, j, 1, 1) + a(i, 2, 1, 2) * a(2, j, 1, 1)))
          - q12 * ((a(i, 1, 1, 1) * a(1, j, 2, 1) + a(i, 2, 1, 1) * a(2, j, 2, 1))
                   + q11 * (a(i, 1, 1, 2) * a(1, j, 2, 1) + a(i, 2, 1, 2) * a(2, j, 2, 1))))
    c2 = ((a(i, 1, 2, 1) * a(1, j, 1, 2) + a(i, 2, 2, 1) * a(2, j, 1, 2))
          + q12 * (a(i, 1, 2, 2) * a(1, j, 1, 1) + a(i, 2, 2, 2) * a(2, j, 1, 1))
          - q11 * ((a(i, 1, 1, 1) * a(1, j, 1, 2) + a(i, 2, 1, 1) * a(2, j, 1, 2))
                   + q12 * (a(i, 1, 1, 2) * a(1, j, 1, 1) + a(i, 2, 1, 2) * a(2, j, 1, 1)))
          - q12 * ((a(i, 1, 1, 1) * a(1, j, 2, 2) + a(i, 2, 1, 1) * a(2, j, 2, 2))
                   + q12 * (a(i, 1, 1, 2) * a(1, j, 2, 1) + a(i, 2, 1, 2) * a(2, j, 2, 1))))
    c3 = ((a(i, 1, 2, 2) * a(1, j, 1, 2) + a(i, 2, 2, 2) * a(2, j, 1, 2))
          - q11 * (a(i, 1, 1, 2) * a(1, j, 1, 2) + a(i, 2, 1, 2) * a(2, j, 1, 2))
          - q12 * (a(i, 1, 1, 2) * a(1, j, 2, 2) + a(i, 2, 1, 2) * a(2, j, 2, 2)))
    c4 = ((a(1, 1, i, 1) * a(2, 1, 1, j) + a(1, 1, i, 2) * a(2, 1, 2, j))
          + p11 * (a(1, 1, i, 1) * a(2, 2, 1, j) + a(1, 1, i, 2) * a(2, 2, 2, j))
          - p11 * (a(1, 1, i, 1) * a(1, 1, 1, j) + a(1, 1, i, 2) * a(1, 1, 2, j))
          - p11 * p11 * (a(1, 1, i, 1) * a(1, 2, 1, j) + a(1, 1, i, 2) * a(1, 2, 2, j))
          - p12 * (a(2, 1, i, 1) * a(1, 1, 1, j) + a(2, 1, i, 2) * a(1, 1, 2, j))
          - p11 * p12 * (a(2, 1, i, 1) * a(1, 2, 1, j) + a(2, 1, i, 2) * a(1, 2, 2, j)))
    c5 = ((a(1, 2, i, 1) * a(2, 1, 1, j) + a(1, 2, i, 2) * a(2, 1, 2, j))
          + p12 * (a(1, 1, i, 1) * a(2, 2, 1, j) + a(1, 1, i, 2) * a(2, 2, 2, j))
          - p11 * (a(1, 2, i, 1) * a(1, 1, 1, j) + a(1, 2, i, 2) * a(1, 1, 2, j))
          - p11 * p12 * (a(1, 1, i, 1) * a(1, 2, 1, j) + a(1, 1, i, 2) * a(1, 2, 2, j))
          - p12 * (a(2, 2, i, 1) * a(1, 1, 1, j) + a(2, 2, i, 2) * a(1, 1, 2, j))
          - p12 * p12 * (a(2, 1, i, 1) * a(1, 2, 1, j) + a(2, 1, i, 2) * a(1, 2, 2, j)))
    c6 = ((a(1, 2, i, 1) * a(2, 2, 1, j) + a(1, 2, i, 2) * a(2, 2, 2, j))
          - p11 * (a(1, 2, i, 1) * a(1, 2, 1, j) + a(1, 2, i, 2) * a(1, 2, 2, j))
          - p12 * (a(2, 2, i, 1) * a(1, 2, 1, j) + a(2, 2, i, 2) * a(1, 2, 2, j)))
    return (c1, c2, c3, c4, c5, c6)


def sigma_det(d: DEData):
    return mat_det(d.sigma)


def check_system_c(d: DEData) -> ConstraintReport:
    rep = ConstraintReport()
    for i, j in PAIRS:
        for k, v in enumerate(_c_values(d, i, j), start=1):
            if v != 0:
                rep.violations.append(f"C{k}_{i}{j}")
    rep.violations.sort(key=lambda s: (s[1], s[3:]))
    rep.det_nonzero = sigma_det(d) != 0
    return rep


def _comp(d: DEData, f, g, s, t):
    """Coordinate matrix of sigma_fg o sigma_st."""
    return mat_mul(d.block(s, t), d.block(f, g))


def r3_residuals(d: DEData):
    """R3.1-R3.3 evaluated on x1, x2 as 2x2 residual matrices (lhs - rhs)."""
    p12, p11 = d.P
    C = lambda f, g, s, t: _comp(d, f, g, s, t)
    r1 = mat_add(mat_add(C(2, 1, 1, 1), mat_scale(p11, C(2, 2, 1, 1))),
                 mat_scale(-1, mat_add(mat_add(mat_scale(p11, C(1, 1, 1, 1)), mat_scale(p11 * p11, C(1, 2, 1, 1))),
                                       mat_add(mat_scale(p12, C(1, 1, 2, 1)), mat_scale(p11 * p12, C(1, 2, 2, 1))))))
    r2 = mat_add(mat_add(C(2, 1, 1, 2), mat_scale(p12, C(2, 2, 1, 1))),
                 mat_scale(-1, mat_add(mat_add(mat_scale(p11, C(1, 1, 1, 2)), mat_scale(p11 * p12, C(1, 2, 1, 1))),
                                       mat_add(mat_scale(p12, C(1, 1, 2, 2)), mat_scale(p12 * p12, C(1, 2, 2, 1))))))
    r3 = mat_add(C(2, 2, 1, 2),
                 mat_scale(-1, mat_add(mat_scale(p11, C(1, 2, 1, 2)), mat_scale(p12, C(1, 2, 2, 2)))))
    return r1, r2, r3


def check_r3_trimmed(d: DEData) -> ConstraintReport:
    """Violations named C4..C6 so they can be compared with check_system_c."""
    rep = ConstraintReport()
    for k, R in enumerate(r3_residuals(d), start=4):
        for i, j in PAIRS:
            if R[i - 1][j - 1] != 0:
                rep.violations.append(f"C{k}_{i}{j}")
    rep.violations.sort(key=lambda s: (s[1], s[3:]))
    rep.det_nonzero = sigma_det(d) != 0
    return rep


# ---------------------------------------------------------------- invariants

def det_sigma(d: DEData):
    """D with det sigma(x_i) = sum_j D[i][j] x_j."""
    p12, p11 = d.P
    S = d.block
    return mat_add(mat_add(mat_scale(-p11, mat_mul(S(1, 1), S(1, 2))), mat_mul(S(1, 1), S(2, 2))),
                   mat_scale(-p12, mat_mul(S(2, 1), S(1, 2))))


def _zero_block(mat, i, j):
    return all(mat[_idx(i, s)][_idx(j, t)] == 0 for s in (1, 2) for t in (1, 2))


def ore_flags(d: DEData) -> Dict[str, bool]:
    M = d.M
    return {
        "Sigma12=0": _zero_block(d.sigma, 1, 2),
        "Sigma21=0,p11=0": _zero_block(d.sigma, 2, 1) and d.P[1] == 0,
        "M12=0": _zero_block(M, 1, 2),
        "M21=0,q11=0": _zero_block(M, 2, 1) and d.Q[1] == 0,
    }


def is_ore_reducible(d: DEData) -> bool:
    return any(ore_flags(d).values())


# ---------------------------------------------------------------- operations

def circ(pair):
    """(p12, p11) -> (1/p12, -p11/p12)."""
    p12, p11 = pair
    if p12 == 0:
        raise DataError("skew parameter is zero")
    return (1 / p12, -p11 / p12)


def dual_data(d: DEData) -> DEData:
    """Opposite ring with x and y exchanged: (Q, P, Sigma) -> (P°, Q°, M)."""
    return DEData.make(circ(d.P), circ(d.Q), d.M, d.field)


def apply_twist(d: DEData, h) -> DEData:
    h = d.field.coerce(h)
    if h == 0:
        raise DataError("twist scalar must be nonzero")
    return d.with_sigma([[h * x for x in row] for row in d.sigma])


def _conj(mat, B):
    n = len(B)
    zero = B[0][0] * 0
    D = [[zero] * 4 for _ in range(4)]
    for b in (0, 2):
        for r in range(n):
            for c in range(n):
                D[b + r][b + c] = B[r][c]
    return mat_mul(mat_mul(D, [list(r) for r in mat]), mat_inv(D))


def _renormalize(B, pair, one, name):
    """New (c12, c11) after the change of generators z' = B z on z2 z1 - c12 z1 z2 - c11 z1^2."""
    c12, c11 = pair
    Bi = mat_inv(B)  # z_k = sum_l Bi[k][l] z'_l
    form = {}
    for (u, v), c in (((1, 0), one), ((0, 1), -c12), ((0, 0), -c11)):
        for l in (0, 1):
            for m in (0, 1):
                form[(l, m)] = form.get((l, m), 0) + c * Bi[u][l] * Bi[v][m]
    lead = form[(1, 0)]
    if lead == 0 or form[(1, 1)] != 0:
        raise DataError(f"transformed {name}-relation is not of the form "
                        f"{name}2{name}1 = c12 {name}1{name}2 + c11 {name}1^2")
    return (-form[(0, 1)] / lead, -form[(0, 0)] / lead)


def transform_xy(d: DEData, Bx, By) -> DEData:
    """New data for generators X' = Bx X and Y' = By Y."""
    c = d.field.coerce
    Bx = [[c(x) for x in r] for r in Bx]
    By = [[c(x) for x in r] for r in By]
    if mat_det(Bx) == 0 or mat_det(By) == 0:
        raise DataError("singular change of generators")
    one = d.field.one()
    Q = _renormalize(Bx, d.Q, one, "x")
    P = _renormalize(By, d.P, one, "y")
    S = _conj(d.sigma, Bx)
    M = _conj(m_matrix(S), By)
    return DEData.make(Q, P, m_matrix(M), d.field)


def verify_equivalence_witness(d: DEData, d2: DEData, Bx, By, h) -> bool:
    return apply_twist(transform_xy(d, Bx, By), h).same(d2)


def substitute(p: NcPoly, images: Dict[int, NcPoly]) -> NcPoly:
    """Algebra map on the free algebra sending generator g to images[g]."""
    out = NcPoly()
    for w, c in p.terms.items():
        t = NcPoly.const(c)
        for g in w:
            t = t * images[g]
        out = out + t
    return out
