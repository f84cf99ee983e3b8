"""Homological and structural checks on a quadratic presentation.

Everything here is finite linear algebra over the coefficient field:
Hilbert dims through a degree bound, the quadratic dual and the numerical
Koszul identity, the matrices F and G of the minimal resolution of the
trivial module, and certificates for normal elements.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .dext import DEData, synth_relations
from .exactnum import QQ, Field, field_of
from .freealg import GENS, NcPoly, Word, format_poly, words
from .linalg import Echelon, express, nullspace, rank
from .ncgb import DEFAULT_N, DegreeBoundError, RewriteSystem, complete, graded_dims


class ResolutionError(ValueError):
    pass


@dataclass
class Presentation:
    relations: List[NcPoly]
    gens: Tuple[int, ...] = (0, 1, 2, 3)
    field: Field = QQ
    _rs: Optional[RewriteSystem] = dc_field(default=None, repr=False)
    _rs_N: int = dc_field(default=-1, repr=False)

    def rewrite(self, N: int = DEFAULT_N) -> RewriteSystem:
        if self._rs is None or (self._rs_N < N and not self._rs.globally_complete):
            self._rs = complete(self.relations, N, self.gens)
            self._rs_N = N
        return self._rs


def presentation(d: DEData) -> Presentation:
    return Presentation(synth_relations(d), (0, 1, 2, 3), d.field)


def commutative_ring(gens: Sequence[int] = (0, 1, 2, 3), fld: Field = QQ) -> Presentation:
    one = fld.one()
    rels = [NcPoly({(b, a): one, (a, b): -one}) for i, a in enumerate(gens) for b in gens[i + 1:]]
    return Presentation(rels, tuple(gens), fld)


def as_presentation(obj) -> Presentation:
    if isinstance(obj, Presentation):
        return obj
    if isinstance(obj, DEData):
        return presentation(obj)
    rels = list(obj)
    fld = field_of(*[c for r in rels for c in r.terms.values()]) if rels else QQ
    return Presentation(rels, (0, 1, 2, 3), fld)


def _vec(p: NcPoly) -> Dict[Word, object]:
    return dict(p.terms)


# ---------------------------------------------------------------- Hilbert / 14641

@dataclass
class TypeReport:
    dims: List[int]
    expected: List[int]
    degree1_relations: int
    degree2_rank: int
    failures: List[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def expected_dims(ngens: int, N: int) -> List[int]:
    return [comb(n + ngens - 1, ngens - 1) for n in range(N + 1)]


def check_type_14641(pres, N: int = DEFAULT_N) -> TypeReport:
    pres = as_presentation(pres)
    g = len(pres.gens)
    rels = pres.relations
    d1 = [r for r in rels if r.degree() == 1]
    r2 = rank([_vec(r) for r in rels if r.degree() == 2])
    failures = []
    if d1:
        failures.append(f"{len(d1)} relation(s) in degree 1")
    want_r2 = g * (g - 1) // 2
    if r2 != want_r2:
        failures.append(f"degree-2 relation space has dimension {r2}, expected {want_r2}")
    dims = graded_dims(pres.rewrite(N), N)
    expected = expected_dims(g, N)
    for n, (a, b) in enumerate(zip(dims, expected)):
        if a != b:
            failures.append(f"dim B_{n} = {a}, expected {b}")
    return TypeReport(dims, expected, len(d1), r2, failures)


# ---------------------------------------------------------------- quadratic dual

@dataclass
class QuadraticDual:
    relation_dim: int
    dual_relations: List[NcPoly]
    dual_dims: List[int]
    euler: List[int]  # sum_m (-1)^m dim B!_m dim B_{n-m}, for n = 0..N

    @property
    def euler_ok(self) -> bool:
        return all(v == 0 for v in self.euler[1:])

    @property
    def dual_relation_dim(self) -> int:
        return len(self.dual_relations)


def dual_relation_space(pres) -> Tuple[int, List[NcPoly]]:
    """Annihilator of the degree-2 relation space under the word pairing."""
    pres = as_presentation(pres)
    if any(r.degree() != 2 for r in pres.relations):
        raise ValueError("quadratic dual needs a purely quadratic presentation")
    cols = words(2, pres.gens)
    rows = [_vec(r) for r in pres.relations]
    basis = nullspace(rows, cols)
    one = pres.field.one()
    dual = [NcPoly({w: one * c for w, c in v.items()}) for v in basis]
    return rank(rows), dual


def koszul_dual_dims(pres, N: int = DEFAULT_N, dims: Optional[List[int]] = None) -> QuadraticDual:
    pres = as_presentation(pres)
    rdim, dual = dual_relation_space(pres)
    drs = complete(dual, N, pres.gens)
    ddims = graded_dims(drs, N)
    if dims is None:
        dims = graded_dims(pres.rewrite(N), N)
    euler = [sum((-1) ** m * ddims[m] * dims[n - m] for m in range(n + 1)) for n in range(N + 1)]
    return QuadraticDual(rdim, dual, ddims, euler)


# ---------------------------------------------------------------- resolution

@dataclass
class ResolutionPair:
    F: List[List[NcPoly]]
    G: List[List[NcPoly]]
    xprime: List[NcPoly]
    gens: Tuple[int, ...] = (0, 1, 2, 3)
    kernel_dim: int = 0
    left_kernel_dim: int = 0


def f_matrix(relations: Sequence[NcPoly], gens: Sequence[int]) -> List[List[NcPoly]]:
    """Row i holds the left cofactors of relation i, one column per generator."""
    F = []
    for r in relations:
        row = {g: {} for g in gens}
        for w, c in r.terms.items():
            row[w[-1]][w[:-1]] = c
        F.append([NcPoly(row[g]) for g in gens])
    return F


def _deg1(vec: Dict, idx, gens, one) -> NcPoly:
    return NcPoly({(g,): one * vec[(idx, g)] for g in gens if vec.get((idx, g), 0) != 0})


def _left_kernel(rs: RewriteSystem, mat: List[List[NcPoly]], gens, one) -> List[Dict]:
    """Degree-1 rows v with v * mat == 0 in the algebra (entries of mat of degree 1)."""
    nrows, ncols = len(mat), len(mat[0])
    unknowns = [(i, g) for i in range(nrows) for g in gens]
    eqs: Dict[Tuple[int, Word], Dict] = {}
    for i, g in unknowns:
        for j in range(ncols):
            if not mat[i][j]:
                continue
            prod = rs.normal_form(NcPoly.word((g,), one) * mat[i][j])
            for w, c in prod.terms.items():
                eqs.setdefault((j, w), {})[(i, g)] = c
    return nullspace(list(eqs.values()), unknowns)


def resolution_matrices(pres, N: int = DEFAULT_N, strict: bool = True) -> ResolutionPair:
    pres = as_presentation(pres)
    rs = pres.rewrite(max(N, 3))
    gens = pres.gens
    one = pres.field.one()
    F = f_matrix(pres.relations, gens)
    kern = _left_kernel(rs, F, gens, one)
    G = [[_deg1(v, k, gens, one) for k in range(len(F))] for v in kern]
    if strict and len(kern) != len(gens):
        raise ResolutionError(f"kernel of F has dimension {len(kern)}, expected {len(gens)}")
    xker = _left_kernel(rs, G, gens, one) if G else []
    if strict and len(xker) != 1:
        raise ResolutionError(f"left kernel of G has dimension {len(xker)}, expected 1")
    xprime = [_deg1(xker[0], i, gens, one) for i in range(len(G))] if len(xker) == 1 else []
    return ResolutionPair(F, G, xprime, tuple(gens), len(kern), len(xker))


def resolution_identities(rp: ResolutionPair, pres, N: int = DEFAULT_N) -> List[str]:
    """Failures of F x = 0, G F = 0 and x' G = 0 in the algebra."""
    pres = as_presentation(pres)
    rs = pres.rewrite(max(N, 3))
    xs = [NcPoly.gen(g) for g in rp.gens]
    bad = []
    for i, row in enumerate(rp.F):
        s = sum((e * x for e, x in zip(row, xs)), NcPoly())
        if rs.normal_form(s):
            bad.append(f"(F x)_{i + 1} != 0")
    for a, grow in enumerate(rp.G):
        for j in range(len(rp.F[0])):
            s = sum((grow[k] * rp.F[k][j] for k in range(len(rp.F))), NcPoly())
            if rs.normal_form(s):
                bad.append(f"(G F)_{a + 1}{j + 1} != 0")
    if rp.xprime:
        for k in range(len(rp.F)):
            s = sum((rp.xprime[i] * rp.G[i][k] for i in range(len(rp.G))), NcPoly())
            if rs.normal_form(s):
                bad.append(f"(x' G)_{k + 1} != 0")
    return bad


# ---------------------------------------------------------------- row, column and span conditions on F and G

@dataclass
class Lemma22Report:
    failures: List[str]
    samples: int

    @property
    def ok(self) -> bool:
        return not self.failures


def _coords(p: NcPoly, gens) -> Dict:
    return {g: p.coefficient((g,)) for g in gens if p.coefficient((g,)) != 0}


def _span_dim(entries: Sequence[NcPoly], gens) -> int:
    return rank([_coords(e, gens) for e in entries])


def _apply_right(mat, vec):
    # mat * vec^T, a column of degree-1 elements
    return [sum((e.scale(c) for e, c in zip(row, vec) if c != 0), NcPoly()) for row in mat]


def _apply_left(vec, mat):
    return [sum((mat[i][j].scale(vec[i]) for i in range(len(mat)) if vec[i] != 0), NcPoly())
            for j in range(len(mat[0]))]


def _random_vec(rng: random.Random, n: int, fld: Field):
    while True:
        v = [fld.coerce(rng.randint(-5, 5)) for _ in range(n)]
        if any(c != 0 for c in v):
            return v


def _injective(mat, side: str, gens) -> bool:
    """Is v -> mat v^T (side 'right') or v -> v mat (side 'left') injective?"""
    rows, cols = len(mat), len(mat[0])
    if side == "right":
        images = [{(i, g): c for i in range(rows) for g, c in _coords(mat[i][j], gens).items()}
                  for j in range(cols)]
    else:
        images = [{(j, g): c for j in range(cols) for g, c in _coords(mat[i][j], gens).items()}
                  for i in range(rows)]
    return rank(images) == len(images)


def check_lemma22(rp: ResolutionPair, pres=None, samples: int = 20, seed: int = 0) -> Lemma22Report:
    fld = as_presentation(pres).field if pres is not None else QQ
    gens = rp.gens
    failures = []
    rng = random.Random(seed)
    for name, mat in (("F", rp.F), ("G", rp.G)):
        if not mat or not mat[0]:
            failures.append(f"{name} is empty")
            continue
        nr, nc = len(mat), len(mat[0])
        for i in range(nr):
            if not any(mat[i]):
                failures.append(f"{name} row {i + 1} is zero")
            elif _span_dim(mat[i], gens) < 2:
                failures.append(f"{name} row {i + 1} spans a subspace of dimension < 2")
        for j in range(nc):
            col = [mat[i][j] for i in range(nr)]
            if not any(col):
                failures.append(f"{name} column {j + 1} is zero")
            elif _span_dim(col, gens) < 2:
                failures.append(f"{name} column {j + 1} spans a subspace of dimension < 2")
        # exact injectivity, then the sampled form of the same statement
        for side in ("right", "left"):
            if not _injective(mat, side, gens):
                failures.append(f"{name}: some nonzero vector is killed on the {side}")
        for _ in range(samples):
            a = _random_vec(rng, nc, fld)
            if not any(_apply_right(mat, a)):
                failures.append(f"{name} * {a}^T = 0")
            b = _random_vec(rng, nr, fld)
            if not any(_apply_left(b, mat)):
                failures.append(f"{b} * {name} = 0")
    return Lemma22Report(failures, samples)


# ---------------------------------------------------------------- normal elements

W_DESCRIPTORS = {
    "x": [(0,), (1,)],
    "y": [(2,), (3,)],
    "x2": words(2, (0, 1)),
    "y2": words(2, (2, 3)),
    "gens": [(0,), (1,), (2,), (3,)],
}


def subspace(descriptor: str, fld: Field = QQ) -> List[NcPoly]:
    one = fld.one()
    return [NcPoly.word(w, one) for w in W_DESCRIPTORS[descriptor]]


@dataclass
class NormalCertificate:
    ok: bool
    # for each w in W: coefficients c with z*w = sum c_i w_i*z, and d with w*z = sum d_i z*w_i
    right: List[Optional[list]]
    left: List[Optional[list]]


def check_normalizer(rs: RewriteSystem, z: NcPoly, W: Sequence[NcPoly]) -> NormalCertificate:
    """Does z normalize span(W) two-sidedly: z*span(W) == span(W)*z?"""
    if z and not z.is_homogeneous():
        raise ValueError("z must be homogeneous")
    for w in W:
        if w and not w.is_homogeneous():
            raise ValueError("elements of W must be homogeneous")
    top = (z.degree() if z else 0) + max((w.degree() for w in W if w), default=0)
    if not rs.globally_complete and top > rs.complete_through:
        raise DegreeBoundError(f"degree {top} exceeds completed degree {rs.complete_through}")
    zw = [_vec(rs.reduce(z * w)) for w in W]
    wz = [_vec(rs.reduce(w * z)) for w in W]
    right = [express(wz, t) for t in zw]
    left = [express(zw, t) for t in wz]
    ok = all(c is not None for c in right) and all(c is not None for c in left)
    return NormalCertificate(ok, right, left)


@dataclass
class ClaimResult:
    element: str
    W: str
    normal: bool
    identities: List[Tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return self.normal and all(v for _, v in self.identities)


def verify_family_normals(name: str, spec=None, N: int = DEFAULT_N) -> List[ClaimResult]:
    from . import catalog
    rec = catalog.get(name)
    spec = spec or rec.specializations[0]
    d = catalog.instantiate_spec(rec.name, spec)
    fld = d.field
    env = spec.values()
    rs = presentation(d).rewrite(N)
    out = []
    for claim in rec.normal_claims:
        z, ids = catalog.claim_polys(claim, env, fld)
        cert = check_normalizer(rs, z, subspace(claim.W, fld))
        checked = [(text, not rs.normal_form(lhs - rhs)) for text, (lhs, rhs) in zip(claim.identities, ids)]
        out.append(ClaimResult(claim.element, claim.W, cert.ok, checked))
    return out


# ---------------------------------------------------------------- bigraded count

def bigraded_counts(rs: RewriteSystem, N: int) -> Dict[Tuple[int, int], int]:
    """Normal words of length <= N counted by (x-degree, y-degree)."""
    if not rs.globally_complete and N > rs.complete_through:
        raise DegreeBoundError(f"counts requested through {N}, completed through {rs.complete_through}")
    counts: Dict[Tuple[int, int], int] = {(0, 0): 1}
    layer = [()]
    for _ in range(N):
        nxt = []
        for w in layer:
            for g in rs.gens:
                v = w + (g,)
                if not rs._suffix_hits(v):
                    nxt.append(v)
                    nx = sum(1 for c in v if c < 2)
                    key = (nx, len(v) - nx)
                    counts[key] = counts.get(key, 0) + 1
        layer = nxt
    return counts


def veronese_check(rs: RewriteSystem, N: int = DEFAULT_N) -> List[str]:
    """Even-x-degree part against sum_m (2m+1)(n-2m+1), plus every bidegree (i+1)(j+1)."""
    counts = bigraded_counts(rs, N)
    bad = []
    for n in range(N + 1):
        for i in range(n + 1):
            got = counts.get((i, n - i), 0)
            if got != (i + 1) * (n - i + 1):
                bad.append(f"bidegree ({i},{n - i}): {got} normal words, expected {(i + 1) * (n - i + 1)}")
        even = sum(counts.get((2 * m, n - 2 * m), 0) for m in range(n // 2 + 1))
        want = sum((2 * m + 1) * (n - 2 * m + 1) for m in range(n // 2 + 1))
        if even != want:
            bad.append(f"degree {n}: {even} even-x normal words, expected {want}")
    return bad


# ---------------------------------------------------------------- family report

def _mat_text(m, fld):
    return [[fld.format(v) for v in row] for row in m]


def family_report(name: str, spec=None, N: int = DEFAULT_N) -> dict:
    """Everything above for one family specialization, as plain JSON data."""
    from . import catalog, dext
    rec = catalog.get(name)
    spec = spec or rec.specializations[0]
    d = catalog.instantiate_spec(rec.name, spec)
    fld = d.field
    pres = presentation(d)
    t = check_type_14641(pres, N)
    kd = koszul_dual_dims(pres, N, t.dims)
    try:
        rp = resolution_matrices(pres, N)
        l22 = check_lemma22(rp, pres)
        res = {"kernel_dim": rp.kernel_dim, "left_kernel_dim": rp.left_kernel_dim,
               "identities": resolution_identities(rp, pres, N), "lemma22": l22.failures}
    except ResolutionError as e:
        res = {"error": str(e)}
    det = dext.det_sigma(d)
    flags = dext.ore_flags(d)
    return {
        "family": rec.name,
        "params": dict(spec.params),
        "field": fld.spec(),
        "relations": [format_poly(r) for r in pres.relations],
        "dims": t.dims,
        "dims_ok": t.ok,
        "dual_dims": kd.dual_dims,
        "euler_ok": kd.euler_ok,
        "detsigma": _mat_text(det, fld),
        "detsigma_expected": _mat_text(catalog.expected_detsigma(rec.name, spec.values(), fld), fld),
        "ore_flags": flags,
        "resolution": res,
        "normal_claims": [
            {"element": c.element, "W": c.W, "normal": c.normal, "identities": dict(c.identities)}
            for c in verify_family_normals(rec.name, spec, N)],
    }
