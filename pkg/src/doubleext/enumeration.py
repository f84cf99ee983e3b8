"""Exhaustive search for solutions of System C over a prime field.

The pruning evaluator here is built independently of ``dext``: the first
twelve constraints are the coefficients of

    sigma(x2) sigma(x1) - q12 sigma(x1) sigma(x2) - q11 sigma(x1)^2

in the degree-2 part of the base quantum plane (each sigma_ij is linear in
x1, x2, products are 2x2 matrix products), and the other twelve are the same
construction applied to the rearranged matrix M with the skew parameters
(1/p12, -p11/p12).  Every constraint is a quadratic form in the 16 entries.

Entries are indexed row-major: entry k is Sigma[k // 4][k % 4].
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Form = Dict[Tuple[int, int], int]  # (u, v) with u <= v -> coefficient mod q


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _sigma_var(i, j, s, t):
    return 4 * (2 * (i - 1) + (s - 1)) + 2 * (j - 1) + (t - 1)


def _m_var(i, j, s, t):
    # M[(i,s)][(j,t)] = a_{s t i j}
    return _sigma_var(s, t, i, j)


def _compat_forms(var, c12: int, c11: int, q: int) -> List[Form]:
    """Forms making z -> sigma(z) respect z2 z1 = c12 z1 z2 + c11 z1^2."""
    forms = []
    for i in (1, 2):
        for j in (1, 2):
            # coefficient vectors of the degree-2 part in the basis z1^2, z1z2, z2^2
            acc = [dict(), dict(), dict()]

            def add(u, v, coef, slot):
                key = (min(u, v), max(u, v))
                acc[slot][key] = (acc[slot].get(key, 0) + coef) % q

            def product(s1, s2, scale):
                # sum_k sigma_ik(z_s1) sigma_kj(z_s2), reduced to normal words
                for k in (1, 2):
                    for t1 in (1, 2):
                        for t2 in (1, 2):
                            u, v = var(i, k, s1, t1), var(k, j, s2, t2)
                            if (t1, t2) == (1, 1):
                                add(u, v, scale, 0)
                            elif (t1, t2) == (1, 2):
                                add(u, v, scale, 1)
                            elif (t1, t2) == (2, 2):
                                add(u, v, scale, 2)
                            else:  # z2 z1 = c12 z1 z2 + c11 z1^2
                                add(u, v, scale * c12, 1)
                                add(u, v, scale * c11, 0)

            product(2, 1, 1)
            product(1, 2, -c12)
            product(1, 1, -c11)
            for f in acc:
                forms.append({k: v for k, v in f.items() if v % q})
    return forms


def constraint_forms(q: int, P: Sequence[int], Q: Sequence[int]) -> List[Form]:
    if not is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    q12, q11 = (c % q for c in Q)
    p12, p11 = (c % q for c in P)
    if q12 == 0 or p12 == 0:
        raise ValueError("p12 and q12 must be nonzero mod q")
    inv = pow(p12, q - 2, q)
    dual = (inv, (-p11 * inv) % q)
    return _compat_forms(_sigma_var, q12, q11, q) + _compat_forms(_m_var, dual[0], dual[1], q)


def variable_order(forms: Sequence[Form]) -> List[int]:
    """Most-constrained entries first; ties broken by index."""
    count = [0] * 16
    for f in forms:
        for v in {x for key in f for x in key}:
            count[v] += 1
    return sorted(range(16), key=lambda v: (-count[v], v))


def det_mod(rows: List[List[int]], q: int) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] % q), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % q
        inv = pow(m[c][c], q - 2, q)
        for r in range(c + 1, n):
            f = m[r][c] * inv % q
            if f:
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[c])]
    return det % q


class _Plan:
    """Per-depth checks: constraints whose last variable is assigned at that depth."""

    def __init__(self, q, P, Q):
        self.q = q
        self.forms = [f for f in constraint_forms(q, P, Q) if f]
        self.order = variable_order(self.forms)
        pos = {v: k for k, v in enumerate(self.order)}
        self.at_depth: List[List[List[Tuple[int, int, int]]]] = [[] for _ in range(16)]
        for f in self.forms:
            last = max(pos[x] for key in f for x in key)
            self.at_depth[last].append([(c, u, v) for (u, v), c in f.items()])

    def search(self, prefix: Tuple[int, ...] = ()) -> List[Tuple[int, ...]]:
        """All full solutions extending ``prefix`` (values in variable order)."""
        q, order = self.q, self.order
        vals = [0] * 16
        for k, x in enumerate(prefix):
            vals[order[k]] = x
            if not self._ok(k, vals):
                return []
        out: List[Tuple[int, ...]] = []
        self._extend(len(prefix), vals, out)
        return out

    def _ok(self, depth, vals) -> bool:
        q = self.q
        for terms in self.at_depth[depth]:
            if sum(c * vals[u] * vals[v] for c, u, v in terms) % q:
                return False
        return True

    def _extend(self, depth, vals, out):
        if depth == 16:
            rows = [vals[4 * r:4 * r + 4] for r in range(4)]
            if det_mod(rows, self.q):
                out.append(tuple(vals))
            return
        var = self.order[depth]
        for x in range(self.q):
            vals[var] = x
            if self._ok(depth, vals):
                self._extend(depth + 1, vals, out)
        vals[var] = 0


def _work(args):
    q, P, Q, prefix = args
    return _Plan(q, P, Q).search(prefix)


def enumerate_csolutions(q: int, P: Sequence[int], Q: Sequence[int], workers: int = 1,
                         split_depth: int = 3) -> List[Tuple[int, ...]]:
    """Every Sigma over GF(q) solving System C with det != 0, as row-major residue tuples.

    Output is sorted lexicographically in the search's variable order, so it
    does not depend on ``workers``.
    """
    plan = _Plan(q, P, Q)
    if workers <= 1:
        sols = plan.search()
    else:
        prefixes = list(itertools.product(range(q), repeat=split_depth))
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = ex.map(_work, [(q, tuple(P), tuple(Q), p) for p in prefixes])
            sols = [s for part in parts for s in part]
    order = plan.order
    sols.sort(key=lambda s: tuple(s[v] for v in order))
    return sols


# ---------------------------------------------------------------- naive oracle

def naive_csolutions(q: int, P: Sequence[int], Q: Sequence[int], chunk_bits: int = 8) -> List[Tuple[int, ...]]:
    """Full scan of GF(q)^16 with the literal constraint formulas, vectorized in numpy."""
    import numpy as np

    from .dext import _c_values

    q12, q11 = (c % q for c in Q)
    p12, p11 = (c % q for c in P)
    hi = 16 - chunk_bits
    # low entries vary fastest inside a chunk
    low = np.array(list(itertools.product(range(q), repeat=chunk_bits)), dtype=np.int64)
    found = []
    for head in itertools.product(range(q), repeat=hi):
        cols = {}
        for k in range(hi):
            cols[k] = np.full(len(low), head[k], dtype=np.int64)
        for k in range(chunk_bits):
            cols[hi + k] = low[:, k]

        view = _Columns(cols, (p12, p11), (q12, q11))
        ok = np.ones(len(low), dtype=bool)
        for i in (1, 2):
            for j in (1, 2):
                for c in _c_values(view, i, j):
                    ok &= (c % q) == 0
                    if not ok.any():
                        break
                if not ok.any():
                    break
            if not ok.any():
                break
        for idx in np.nonzero(ok)[0]:
            sig = tuple(int(cols[k][idx]) for k in range(16))
            if det_mod([list(sig[4 * r:4 * r + 4]) for r in range(4)], q):
                found.append(sig)
    return found


class _Columns:
    """Duck-typed stand-in for DEData whose entries are numpy columns."""

    def __init__(self, cols, P, Q):
        self.cols, self.P, self.Q = cols, P, Q

    def a(self, i, j, s, t):
        return self.cols[_sigma_var(i, j, s, t)]


# ---------------------------------------------------------------- buckets

@dataclass
class BucketSummary:
    counts: Dict[tuple, int]
    total: int
    non_ore: int

    def rows(self):
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))


def _block_zero(sig, i, j):
    return all(sig[4 * (2 * i + s) + 2 * j + t] == 0 for s in (0, 1) for t in (0, 1))


def bucket_key(sig: Sequence[int], q: int, P: Sequence[int]) -> tuple:
    """(Sigma12=0, Sigma21=0, M12=0, M21=0, char poly of det sigma as (1, c1, c0))."""
    m = [sig[4 * (2 * (s) + i) + 2 * t + j] for i in (0, 1) for s in (0, 1) for j in (0, 1) for t in (0, 1)]
    # m is M row-major: M[(i,s)][(j,t)] = a_{s t i j}
    blk = lambda i, j: [[sig[4 * (2 * i + s) + 2 * j + t] for t in (0, 1)] for s in (0, 1)]
    p12, p11 = (c % q for c in P)

    def mul(A, B):
        return [[sum(A[r][k] * B[k][c] for k in (0, 1)) % q for c in (0, 1)] for r in (0, 1)]

    # det sigma = -p11 S11 S12 + S11 S22 - p12 S21 S12 on the coordinate vector of x
    A, B, C = mul(blk(0, 0), blk(0, 1)), mul(blk(0, 0), blk(1, 1)), mul(blk(1, 0), blk(0, 1))
    D = [[(-p11 * A[r][c] + B[r][c] - p12 * C[r][c]) % q for c in (0, 1)] for r in (0, 1)]
    tr = (D[0][0] + D[1][1]) % q
    dt = (D[0][0] * D[1][1] - D[0][1] * D[1][0]) % q
    return (_block_zero(sig, 0, 1), _block_zero(sig, 1, 0),
            _block_zero(m, 0, 1), _block_zero(m, 1, 0), (1, (-tr) % q, dt))


def bucket_solutions(stream: Iterable[Sequence[int]], q: int = 3, P: Sequence[int] = (1, 0),
                     Q: Sequence[int] = (1, 0)) -> BucketSummary:
    counts: Dict[tuple, int] = {}
    total = non_ore = 0
    p11, q11 = P[1] % q, Q[1] % q
    for sig in stream:
        key = bucket_key(sig, q, P)
        counts[key] = counts.get(key, 0) + 1
        total += 1
        s12, s21, m12, m21 = key[:4]
        if not (s12 or (s21 and p11 == 0) or m12 or (m21 and q11 == 0)):
            non_ore += 1
    return BucketSummary(counts, total, non_ore)


def format_sigma(sig: Sequence[int]) -> str:
    return ",".join(str(x) for x in sig)


def parse_sigma_line(line: str) -> Tuple[int, ...]:
    vals = tuple(int(x) for x in line.strip().split(","))
    if len(vals) != 16:
        raise ValueError(f"expected 16 residues, got {len(vals)}")
    return vals
