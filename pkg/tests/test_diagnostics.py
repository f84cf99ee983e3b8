import json

import pytest
from hypothesis import given, settings, strategies as st

from doubleext import catalog, dext, diagnostics as D
from doubleext.exactnum import QQ, QuadraticField
from doubleext.freealg import NcPoly, parse_poly as P, words, x, y
from doubleext.ncgb import DegreeBoundError, complete

EXPECTED = [1, 4, 10, 20, 35, 56, 84, 120, 165]
DUAL = [1, 4, 6, 4, 1, 0, 0, 0, 0]


def fam(name, fld=None, **params):
    return D.presentation(catalog.instantiate(name, params, fld))


def test_type_check_s():
    rep = D.check_type_14641(fam("S", h=1), 8)
    assert rep.ok and rep.dims == EXPECTED
    assert rep.degree1_relations == 0 and rep.degree2_rank == 6


def test_type_check_commutative_ring():
    assert D.check_type_14641(D.commutative_ring(), 8).ok


def test_seventh_relation_breaks_type():
    pres = fam("S", h=1)
    extra = D.Presentation(list(pres.relations) + [P("x1*x2")])
    rep = D.check_type_14641(extra, 6)
    assert not rep.ok
    assert rep.degree2_rank == 7
    assert rep.dims[2] == 9


def test_expected_dims_binomial():
    assert D.expected_dims(4, 8) == EXPECTED
    assert D.expected_dims(2, 4) == [1, 2, 3, 4, 5]


def test_koszul_dual_c():
    fld = QuadraticField(1, 1)
    kd = D.koszul_dual_dims(fam("C", fld, h=1, p=fld.gen), 8)
    assert kd.dual_dims == DUAL and kd.euler_ok
    assert kd.relation_dim + kd.dual_relation_dim == 16


def test_koszul_dual_commutative_is_exterior():
    kd = D.koszul_dual_dims(D.commutative_ring(), 6)
    assert kd.dual_dims[:5] == [1, 4, 6, 4, 1]
    assert kd.euler_ok


def test_koszul_dual_quantum_plane():
    plane = D.Presentation([P("x2*x1 - 3*x1*x2")], gens=(0, 1))
    kd = D.koszul_dual_dims(plane, 4)
    assert kd.dual_dims == [1, 2, 1, 0, 0]
    assert kd.euler_ok


def test_dual_relations_annihilate():
    pres = fam("O", h=1, f=2)
    dim, dual = D.dual_relation_space(pres)
    assert dim == 6 and len(dual) == 10
    for r in pres.relations:
        for s in dual:
            assert sum(c * s.coefficient(w) for w, c in r.terms.items()) == 0


def test_non_quadratic_input_rejected():
    with pytest.raises(ValueError):
        D.koszul_dual_dims(D.Presentation([P("x1*x2*x1 - x2*x1*x2")]), 4)


def _rows_reassemble(rp, pres):
    for row, rel in zip(rp.F, pres.relations):
        assert sum((e * NcPoly.gen(g) for e, g in zip(row, rp.gens)), NcPoly()) == rel


def test_resolution_a():
    pres = fam("A", h=1)
    rp = D.resolution_matrices(pres, 8)
    assert rp.kernel_dim == 4 and rp.left_kernel_dim == 1
    assert len(rp.F) == 6 and len(rp.F[0]) == 4 and len(rp.G) == 4 and len(rp.G[0]) == 6
    _rows_reassemble(rp, pres)
    assert D.resolution_identities(rp, pres, 8) == []


def test_resolution_commutative_ring():
    pres = D.commutative_ring()
    rp = D.resolution_matrices(pres, 6)
    assert rp.kernel_dim == 4
    _rows_reassemble(rp, pres)
    assert D.resolution_identities(rp, pres, 6) == []
    assert D.check_lemma22(rp, pres).ok


def test_resolution_and_span_conditions_o():
    pres = fam("O", h=1, f=2)
    rp = D.resolution_matrices(pres, 8)
    assert rp.kernel_dim == 4
    assert D.check_lemma22(rp, pres).ok


def test_span_conditions_r():
    pres = fam("R", h=1)
    assert D.check_lemma22(D.resolution_matrices(pres), pres).ok


def test_non_regular_shape_fails_span_condition():
    # x1 x4 = x4 x1, x4^2 = x2^2 and four relations in x1, x2, x3 (x3 = y1, x4 = y2)
    rels = [P("x1*y2 - y2*x1"), P("y2*y2 - x2*x2"), P("x2*x1 - x1*x2"), P("y1*x1 - x1*y1"),
            P("y1*x2 - x2*y1"), P("y1*y1 - x1*x2")]
    pres = D.Presentation(rels)
    with pytest.raises(D.ResolutionError):
        D.resolution_matrices(pres, 5)
    rp = D.resolution_matrices(pres, 5, strict=False)
    assert [str(e) if e else "0" for e in rp.F[0]] == ["-y2", "0", "0", "x1"]
    col = [row[1] for row in rp.G if row[1]]
    assert col and all(e.terms.keys() == {(0,)} for e in col)  # spanned by x1 alone
    rep = D.check_lemma22(rp, pres)
    assert "G column 2 spans a subspace of dimension < 2" in rep.failures


def test_normalizer_examples():
    fi = QuadraticField(0, 1)
    pres = fam("I", fi, h=1, q=fi.gen)
    rs = pres.rewrite(8)
    q = fi.gen
    z = y(1) * y(2)
    assert D.check_normalizer(rs, z, D.subspace("x2", fi)).ok
    for w in (x(1), x(2)):
        assert rs.normal_form(z * w) == rs.normal_form((w * z).scale(-(1 + q) ** 2))
    # on degree-2 x-words the scalar is squared
    for w in D.subspace("x2", fi):
        assert rs.normal_form(z * w) == rs.normal_form((w * z).scale((1 + q) ** 4))
    assert D.check_normalizer(rs, NcPoly.const(fi.one()), D.subspace("gens", fi)).ok
    fw = QuadraticField(1, 1)
    rc = fam("C", fw, h=1, p=fw.gen).rewrite(8)
    assert D.check_normalizer(rc, P("y1^3 - y2^3", fw), D.subspace("gens", fw)).ok
    assert not D.check_normalizer(rc, P("y1^3", fw), D.subspace("gens", fw)).ok


def test_normalizer_degree_bound():
    rs = complete([P("x2*x1*x2 - x1*x2*x1")], 4, gens=(0, 1))
    assert rs.truncated
    with pytest.raises(DegreeBoundError):
        D.check_normalizer(rs, P("x1^3"), D.subspace("x2"))


def test_t_skew_commutation_factor_two():
    rs = fam("T", h=1).rewrite(8)
    lhs = rs.normal_form(y(1) * (x(1) + x(2)))
    rhs = rs.normal_form(((x(1) + x(2)) * y(2)).scale(2))
    assert lhs == rhs
    assert D.check_normalizer(rs, x(1) + x(2), D.subspace("y")).ok


def test_o_special_case_x1_squared():
    rs = fam("O", h=1, f=0).rewrite(8)
    assert D.check_normalizer(rs, x(1) * x(1), D.subspace("gens")).ok


def test_c_scalar_against_x():
    fw = QuadraticField(1, 1)
    p = fw.gen
    rs = fam("C", fw, h=1, p=p).rewrite(8)
    z = P("y1^2*y2", fw)
    assert D.check_normalizer(rs, z, D.subspace("gens", fw)).ok
    w = x(1) - x(2).scale(p)
    assert rs.normal_form(z * w) == rs.normal_form((w * z).scale((p - 1) ** 2 * (1 - p * p)))


RUNS = [(n, sp) for n in catalog.family_names() for sp in catalog.default_specializations(n)]


@pytest.mark.parametrize("name", [n for n in catalog.family_names() if catalog.get(n).normal_claims])
def test_family_normal_claims(name):
    for spec in catalog.default_specializations(name):
        res = D.verify_family_normals(name, spec, 8)
        assert res and all(r.ok for r in res), [r for r in res if not r.ok]


@pytest.mark.parametrize("name,spec", RUNS[1::3], ids=lambda v: getattr(v, "label", lambda: v)())
def test_veronese_and_bigraded_counts(name, spec):
    rs = D.presentation(catalog.instantiate_spec(name, spec)).rewrite(8)
    assert D.veronese_check(rs, 8) == []
    counts = D.bigraded_counts(rs, 6)
    assert all(counts[(i, j)] == (i + 1) * (j + 1) for (i, j) in counts)


def test_family_report_is_json():
    rep = D.family_report("W", catalog.default_specializations("W")[0], 6)
    text = json.dumps(rep)
    back = json.loads(text)
    assert back["dims"] == EXPECTED[:7]


ring = D.commutative_ring()
ring_rs = ring.rewrite(6)


@settings(max_examples=40)
@given(st.integers(0, 3), st.sampled_from(sorted(D.W_DESCRIPTORS)))
def test_generators_are_normal_in_the_commutative_ring(g, W):
    assert D.check_normalizer(ring_rs, NcPoly.gen(g), D.subspace(W)).ok


@settings(max_examples=30)
@given(st.dictionaries(st.sampled_from(list(words(2))), st.integers(-3, 3).filter(bool), min_size=1, max_size=4))
def test_commutative_ring_center(terms):
    # every element of the commutative ring is normal
    z = NcPoly(terms)
    assert D.check_normalizer(ring_rs, z, D.subspace("gens")).ok
