"""Sparse exact Gaussian elimination over any of the scalar fields.

Vectors are dicts ``column -> nonzero scalar``; columns can be any hashable
sortable keys (ints, words).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence

Vec = Dict[Hashable, object]


def _axpy(v: Vec, c, w: Vec) -> Vec:
    """Return v + c*w."""
    out = dict(v)
    for k, x in w.items():
        s = out.get(k, 0) + c * x
        if s == 0:
            out.pop(k, None)
        else:
            out[k] = s
    return out


class Echelon:
    """Incremental reduced row echelon form.

    ``add`` reduces a vector against the current pivots and, if it survives,
    inserts it (normalized to pivot coefficient 1) and back-substitutes.
    Pivots are chosen as the largest column under ``key``.
    """

    def __init__(self, key=None):
        self.key = key
        self.pivots: Dict[Hashable, Vec] = {}

    def reduce(self, v: Vec) -> Vec:
        v = {k: x for k, x in v.items() if x != 0}
        for col in [c for c in v if c in self.pivots]:
            c = v.get(col, 0)
            if c != 0:
                v = _axpy(v, -c, self.pivots[col])
        return v

    def add(self, v: Vec) -> Optional[Hashable]:
        v = self.reduce(v)
        if not v:
            return None
        col = max(v, key=self.key) if self.key else max(v)
        lead = v[col]
        inv = Fraction(1, lead) if isinstance(lead, int) else 1 / lead
        v = {k: x * inv for k, x in v.items()}
        for pc, row in self.pivots.items():
            c = row.get(col, 0)
            if c != 0:
                self.pivots[pc] = _axpy(row, -c, v)
        self.pivots[col] = v
        return col

    def rank(self) -> int:
        return len(self.pivots)


def rank(rows: Sequence[Vec], key=None) -> int:
    e = Echelon(key)
    for r in rows:
        e.add(r)
    return e.rank()


def nullspace(rows: Sequence[Vec], columns: Sequence[Hashable]) -> List[Vec]:
    """Basis of {x : sum_c row[c]*x[c] = 0 for every row}, x indexed by ``columns``.

    The basis is canonical: one vector per free column, with coefficient 1
    there and 0 at the other free columns.
    """
    order = {c: i for i, c in enumerate(columns)}
    e = Echelon(key=lambda c: -order[c])  # pivot on the earliest column
    for r in rows:
        e.add(r)
    free = [c for c in columns if c not in e.pivots]
    basis = []
    for fc in free:
        v = {fc: 1}
        for pc, row in e.pivots.items():
            c = row.get(fc, 0)
            if c != 0:
                v[pc] = -c
        basis.append(v)
    return basis


def express(vectors: Sequence[Vec], target: Vec) -> Optional[list]:
    """Coefficients c with sum c_i * vectors[i] == target, or None."""
    tagged = []
    n = len(vectors)
    for i, v in enumerate(vectors):
        w = {("v", k): x for k, x in v.items()}
        w[("tag", i)] = 1
        tagged.append(w)
    # pivot only on vector coordinates so tags record the combination
    e = Echelon(key=lambda c: (c[0] == "v", c[1]))
    for w in tagged:
        e.add(w)
    t = {("v", k): x for k, x in target.items() if x != 0}
    t = e.reduce(t)
    if any(k[0] == "v" for k in t):
        return None
    coeffs = [0] * n
    for (kind, i), x in t.items():
        coeffs[i] = -x
    return coeffs


# dense helpers for the small (2x2, 4x4) matrices used by the data layer

def mat_mul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), 0 * A[0][0]) for j in range(len(B[0]))]
            for i in range(len(A))]


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A):
    return [[c * a for a in row] for row in A]


def identity(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def mat_det(A):
    """Determinant by exact elimination."""
    M = [list(r) for r in A]
    n = len(M)
    det = M[0][0] ** 0 if n else 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return 0 * det
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] * inv
            if f != 0:
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return det


def mat_inv(A):
    n = len(A)
    one = A[0][0] ** 0
    M = [list(r) + identity(n, one)[i] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]
