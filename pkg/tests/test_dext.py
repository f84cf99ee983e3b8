import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from doubleext import catalog, dext, enumeration
from doubleext.exactnum import QQ, PrimeField, QuadraticField
from doubleext.freealg import parse_poly, x, y
from doubleext.linalg import mat_inv
from doubleext.ncgb import complete, graded_dims, ideal_span

I4 = [[int(r == c) for c in range(4)] for r in range(4)]
RING = dext.DEData.make((1, 0), (1, 0), I4)


def rel_set(rels):
    return {r.monic() for r in rels}


def test_a_relations_match_printed_list():
    printed = ["x2*x1 - x1*x2", "y2*y1 - y1*y2 - y1^2", "y1*x1 - x1*y1", "y1*x2 - x2*y1 - x1*y2",
               "y2*x1 - x1*y2", "y2*x2 + 2*x2*y1 + x1*y2 - x2*y2"]
    got = dext.synth_relations(catalog.instantiate("A", {"h": 1}))
    assert rel_set(got) == rel_set(parse_poly(t) for t in printed)


def test_identity_sigma_gives_commutators():
    got = dext.synth_relations(RING)
    want = [parse_poly(f"{b}*{a} - {a}*{b}") for a, b in
            [("x1", "x2"), ("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2"), ("y1", "y2")]]
    assert rel_set(got) == rel_set(want)


def test_z_relations_rows_two_and_three_match_print():
    got = {str(r) for r in dext.synth_relations(catalog.instantiate("Z", {"h": 1, "f": 2}))}
    assert "y1*x2 - x2*y1 - x1*y2" in got
    assert "y2*x1 - 2*x2*y1 + x1*y2" in got
    # rows 1 and 4 follow Sigma, not the printed list
    assert "y1*x1 - x2*y2 - x1*y1" in got
    assert "y2*x2 + x2*y2 - 2*x1*y1" in got
    assert "y1*x1 - x2*y2 - x1*y2" not in got


def test_system_c_examples():
    fld = QuadraticField(0, 1)
    b = catalog.instantiate("B", {"h": 1, "p": fld.gen}, fld)
    assert dext.check_system_c(b).ok
    assert dext.check_system_c(RING).ok


def perturbed_a():
    d = catalog.instantiate("A", {"h": 1})
    S = [list(r) for r in d.sigma]
    assert S[3][1] == -2  # a_2122
    S[3][1] = -1
    return d.with_sigma(S)


def test_perturbed_a_violations():
    d = perturbed_a()
    assert dext.check_system_c(d).violations == ["C4_21", "C5_21"]
    assert dext.check_r3_trimmed(d).violations == ["C4_21", "C5_21"]
    # the enumerator's independently built forms also reject it
    q = 101
    flat = [int(v) % q for r in d.sigma for v in r]
    forms = enumeration.constraint_forms(q, (1, 1), (1, 0))
    bad = [k for k, f in enumerate(forms) if sum(c * flat[u] * flat[v] for (u, v), c in f.items()) % q]
    assert bad == [19]


def test_r3_examples():
    assert dext.check_r3_trimmed(catalog.instantiate("S", {"h": 1})).ok
    assert dext.check_r3_trimmed(RING).ok


def test_det_sigma_examples():
    assert dext.det_sigma(catalog.instantiate("A", {"h": 1})) == [[1, 0], [0, 1]]
    fld = QuadraticField(1, 1)
    p = fld.gen
    c = catalog.instantiate("C", {"h": 1, "p": p}, fld)
    assert dext.det_sigma(c) == [[-3 * p, 0], [0, -3]]
    n = catalog.instantiate("N", {"f": 2, "g": 3})
    assert dext.det_sigma(n) == [[-5, 0], [0, -5]]


def test_m_matrix_examples():
    a = catalog.instantiate("A", {"h": 1})
    assert a.M == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 1, 1, 0), (0, -1, -2, 1))
    assert RING.M == tuple(tuple(r) for r in I4)
    t = catalog.instantiate("T", {"h": 1})
    assert t.M == catalog.printed_m("T", {"h": 1}, QQ)
    assert dext.m_matrix(dext.m_matrix(t.sigma)) == t.sigma


def test_ore_flag_examples():
    assert dext.ore_flags(catalog.instantiate("A", {"h": 1}))["M12=0"]
    assert not any(dext.ore_flags(catalog.instantiate("S", {"h": 1})).values())
    # P = Q = (1,1), first lower-triangular solution family
    for f, g, h, m in ((1, 0, 0, 0), (2, 3, -1, 5), (-1, 1, 4, 2)):
        lower = dext.DEData.make((1, 1), (1, 1), [[f, 0, 0, 0], [g, f, 0, 0], [h, 0, f, 0], [m, h, g, f]])
        assert dext.check_system_c(lower).ok
        assert dext.ore_flags(lower)["Sigma12=0"]


def test_dual_examples():
    assert dext.circ((Fraction(1), Fraction(0))) == (1, 0)
    t, u = catalog.instantiate("T", {"h": 1}), catalog.instantiate("U", {"h": 1})
    assert dext.verify_equivalence_witness(dext.dual_data(t), u, [[1, 0], [0, 1]], [[1, 0], [0, 1]], 1)
    with pytest.raises(dext.DataError):
        dext.dual_data(dext.DEData.make((1, 0), (0, 1), I4))


def test_twist_examples():
    r = catalog.instantiate("R", {"h": 1})
    assert dext.apply_twist(r, 1).same(r)
    r2 = dext.apply_twist(r, 2)
    assert dext.check_system_c(r2).ok
    assert dext.sigma_det(r2) == 16 * dext.sigma_det(r)
    assert dext.check_system_c(dext.apply_twist(catalog.instantiate("S", {"h": 1}), 5)).ok
    with pytest.raises(dext.DataError):
        dext.apply_twist(r, 0)


def test_transform_identity_and_errors():
    s = catalog.instantiate("S", {"h": 1})
    assert dext.transform_xy(s, [[1, 0], [0, 1]], [[1, 0], [0, 1]]).same(s)
    with pytest.raises(dext.DataError):
        dext.transform_xy(s, [[1, 1], [1, 1]], [[1, 0], [0, 1]])
    with pytest.raises(dext.DataError):
        # x1 + x2, x2 does not keep x2 x1 = -x1 x2 in normal form
        dext.transform_xy(s, [[1, 1], [0, 1]], [[1, 0], [0, 1]])


def test_y_change_shifts_corner_entry():
    g, m = Fraction(2), Fraction(5)
    d = dext.DEData.make((1, 0), (1, 1), [[1, 0, 0, 0], [g, 1, 1, 0], [0, 0, 1, 0], [m, -2, -g - 1, 1]])
    assert dext.check_system_c(d).ok
    assert d.M == ((1, 0, 0, 0), (0, 1, 0, 0), (g, 1, 1, 0), (m, -g - 1, -2, 1))
    t = dext.transform_xy(d, [[1, 0], [0, 1]], [[1, 0], [g, 1]])
    assert (t.Q, t.P) == (d.Q, d.P)
    assert t.M == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 1, 1, 0), (m + g + g * g, -1, -2, 1))


def test_x_change_clears_corner_to_a():
    g = Fraction(3)
    d = dext.DEData.make((1, 0), (1, 1), [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [g, -2, -1, 1]])
    t = dext.transform_xy(d, [[1, 0], [-g / 2, 1]], [[1, 0], [0, 1]])
    assert t.same(catalog.instantiate("A", {"h": 1}))


@pytest.mark.parametrize("f,fld", [(4, QQ), (2, QuadraticField(0, -2))])
def test_z_m_matrix_after_root_change(f, fld):
    s = Fraction(2) if fld is QQ else fld.gen
    z = catalog.instantiate("Z", {"h": 1, "f": f}, fld)
    t = dext.transform_xy(z, [[1, 0], [0, 1]], [[s, 1], [s, -1]])
    zero = fld.zero()
    assert t.M == ((zero, 1, s, zero), (1, zero, zero, -s), (s, zero, zero, 1), (zero, -s, 1, zero))


def test_witness_identity():
    w = catalog.instantiate("W", {"h": 1, "f": 2})
    assert dext.verify_equivalence_witness(w, w, [[1, 0], [0, 1]], [[1, 0], [0, 1]], 1)
    assert not dext.verify_equivalence_witness(w, w, [[1, 0], [0, 1]], [[1, 0], [0, 1]], 2)


def test_transform_matches_substitution():
    rng = random.Random(4)
    for name in ("Z", "C", "N", "A", "H"):
        d = catalog.instantiate_spec(name, catalog.default_specializations(name)[0])
        for _ in range(5):
            Bx = [[1, 0], [0, rng.choice([2, -3, 5])]]
            By = [[rng.choice([1, -2]), 0], [0, rng.choice([3, -1])]]
            t = dext.transform_xy(d, Bx, By)
            # X = Bx^-1 X', so substitute old generators by new ones and compare ideals in degree 2
            Bxi, Byi = mat_inv([[d.field.coerce(v) for v in r] for r in Bx]), \
                mat_inv([[d.field.coerce(v) for v in r] for r in By])
            img = {0: x(1).scale(Bxi[0][0]) + x(2).scale(Bxi[0][1]),
                   1: x(1).scale(Bxi[1][0]) + x(2).scale(Bxi[1][1]),
                   2: y(1).scale(Byi[0][0]) + y(2).scale(Byi[0][1]),
                   3: y(1).scale(Byi[1][0]) + y(2).scale(Byi[1][1])}
            subs = [dext.substitute(r, img) for r in dext.synth_relations(d)]
            a, b = ideal_span(subs, 2), ideal_span(dext.synth_relations(t), 2)
            assert a.rank() == b.rank() == 6
            for r in dext.synth_relations(t):
                assert not any(a.reduce(dict(r.terms)).values())


def test_de_file_roundtrip():
    fld = QuadraticField(0, 1)
    b = catalog.instantiate("B", {"h": 2, "p": fld.gen}, fld)
    text = b.to_text()
    assert dext.parse_de(text).same(b)
    assert dext.parse_de(text).to_text() == text
    with pytest.raises(ValueError):
        dext.parse_de("Q\nQ = (1, 0)\n")


# ---------------------------------------------------------------- properties

def random_gf11_data(rng):
    q = 11
    fld = PrimeField(q)
    sig = [[rng.randrange(q) for _ in range(4)] for _ in range(4)]
    P = (rng.randrange(1, q), rng.randrange(q))
    Q = (rng.randrange(1, q), rng.choice([0, 1]))
    return dext.DEData.make(Q, P, sig, fld)


def test_r3_agrees_with_literal_constraints_gf11():
    rng = random.Random(11)
    for _ in range(500):
        d = random_gf11_data(rng)
        lit = [v for v in dext.check_system_c(d).violations if v[1] in "456"]
        assert lit == dext.check_r3_trimmed(d).violations


GF3_SOLUTIONS = enumeration.enumerate_csolutions(3, (2, 0), (2, 0))
GF3 = PrimeField(3)


@settings(max_examples=100)
@given(st.sampled_from(GF3_SOLUTIONS), st.sampled_from([1, 2]))
def test_twist_preserves_solutions_and_flags(sol, h):
    d = dext.DEData.make((2, 0), (2, 0), [sol[4 * r:4 * r + 4] for r in range(4)], GF3)
    t = dext.apply_twist(d, h)
    assert dext.check_system_c(t).ok == dext.check_system_c(d).ok is True
    assert dext.ore_flags(t) == dext.ore_flags(d)
    hh = GF3.coerce(h) ** 2
    assert dext.det_sigma(t) == [[hh * v for v in row] for row in dext.det_sigma(d)]


@settings(max_examples=100)
@given(st.integers(0, 10 ** 6), st.integers(1, 50))
def test_twist_on_random_gf11_data(seed, h):
    d = random_gf11_data(random.Random(seed))
    t = dext.apply_twist(d, h % 11 or 1)
    assert dext.check_system_c(t).ok == dext.check_system_c(d).ok
    assert dext.ore_flags(t) == dext.ore_flags(d)


FAMILY_RUNS = [(n, sp) for n in catalog.family_names() for sp in catalog.default_specializations(n)]


@pytest.mark.parametrize("name,spec", FAMILY_RUNS, ids=[f"{n}-{s.label()}" for n, s in FAMILY_RUNS])
def test_double_dual_is_identity(name, spec):
    d = catalog.instantiate_spec(name, spec)
    dd = dext.dual_data(dext.dual_data(d))
    assert dd.same(d)
    assert rel_set(dext.synth_relations(dd)) == rel_set(dext.synth_relations(d))


@pytest.mark.parametrize("name", catalog.family_names())
def test_det_sigma_twist_law(name):
    spec = catalog.default_specializations(name)[0]
    d = catalog.instantiate_spec(name, spec)
    for h in (2, -3, Fraction(1, 2)):
        got = dext.det_sigma(dext.apply_twist(d, h))
        assert got == [[h * h * v for v in row] for row in dext.det_sigma(d)]


def test_hilbert_dims_of_solutions_gf3():
    # every C-solution gives the PBW-sized Hilbert series
    rng = random.Random(3)
    for sol in rng.sample(GF3_SOLUTIONS, 12):
        d = dext.DEData.make((2, 0), (2, 0), [sol[4 * r:4 * r + 4] for r in range(4)], GF3)
        rs = complete(dext.synth_relations(d), 8)
        assert graded_dims(rs, 8) == [1, 4, 10, 20, 35, 56, 84, 120, 165]
