import random

import pytest

from doubleext import catalog, dext, enumeration as E
from doubleext.exactnum import PrimeField

GF3 = PrimeField(3)
ONE_ZERO = E.enumerate_csolutions(3, (1, 0), (1, 0))
MINUS = E.enumerate_csolutions(3, (2, 0), (2, 0))
JORDAN_Y = E.enumerate_csolutions(3, (1, 1), (1, 0))


def mod3(name, **params):
    d = catalog.instantiate(name, params)
    return tuple(int(v) % 3 for row in d.sigma for v in row)


def as_data(sig, P, Q, q=3):
    return dext.DEData.make(Q, P, [sig[4 * r:4 * r + 4] for r in range(4)], PrimeField(q))


def test_identity_is_a_solution():
    assert tuple(int(r == c) for r in range(4) for c in range(4)) in ONE_ZERO


def test_s_mod_3_is_a_solution():
    assert mod3("S", h=1) in MINUS


def test_a_mod_3_is_a_solution():
    sig = mod3("A", h=1)
    assert dext.check_system_c(as_data(sig, (1, 1), (1, 0))).ok
    assert sig in JORDAN_Y


def test_bad_inputs():
    with pytest.raises(ValueError, match="not prime"):
        E.enumerate_csolutions(4, (1, 0), (1, 0))
    with pytest.raises(ValueError):
        E.enumerate_csolutions(3, (3, 0), (1, 0))


def test_baseline_counts():
    # artifact baselines; the q = 3 sets are equal to the full scan (see acceptance)
    assert (len(ONE_ZERO), len(MINUS), len(JORDAN_Y)) == (7296, 304, 816)
    assert E.bucket_solutions(ONE_ZERO, 3, (1, 0), (1, 0)).non_ore == 2032
    assert E.bucket_solutions(MINUS, 3, (2, 0), (2, 0)).non_ore == 80
    assert E.bucket_solutions(JORDAN_Y, 3, (1, 1), (1, 0)).non_ore == 72


@pytest.mark.parametrize("P,Q", [((1, 0), (1, 0)), ((1, 1), (1, 0)), ((1, 0), (1, 1)), ((1, 1), (1, 1))])
def test_full_scan_agrees_over_gf2(P, Q):
    assert E.enumerate_csolutions(2, P, Q) == sorted(E.naive_csolutions(2, P, Q),
                                                     key=lambda s: tuple(s[v] for v in E._Plan(2, P, Q).order))


@pytest.mark.parametrize("sols,P,Q", [(MINUS, (2, 0), (2, 0)), (JORDAN_Y, (1, 1), (1, 0))])
def test_soundness_against_literal_constraints(sols, P, Q):
    for sig in sols:
        assert dext.check_system_c(as_data(sig, P, Q)).ok


def test_soundness_sample_commutative_case():
    for sig in random.Random(0).sample(ONE_ZERO, 400):
        assert dext.check_system_c(as_data(sig, (1, 0), (1, 0))).ok


def test_no_duplicates_and_sorted():
    order = E._Plan(3, (2, 0), (2, 0)).order
    keys = [tuple(s[v] for v in order) for s in MINUS]
    assert keys == sorted(set(keys))


def test_worker_count_independence():
    assert E.enumerate_csolutions(3, (2, 0), (2, 0), workers=2) == MINUS
    assert E.enumerate_csolutions(3, (1, 1), (1, 0), workers=3, split_depth=2) == JORDAN_Y


def test_diagonal_solutions_are_ore():
    for sig in ONE_ZERO:
        diag = all(sig[4 * r + c] == 0 for r in range(4) for c in range(4) if r != c)
        if diag:
            key = E.bucket_key(sig, 3, (1, 0))
            assert key[0]


def test_s_lands_outside_ore_buckets():
    s = E.bucket_solutions(MINUS, 3, (2, 0), (2, 0))
    key = E.bucket_key(mod3("S", h=1), 3, (2, 0))
    assert key[:4] == (False, False, False, False)
    assert s.counts[key] > 0 and s.non_ore > 0
    assert sum(s.counts.values()) == s.total == 304


def test_bucket_charpoly_matches_det_sigma():
    for sig in MINUS[:50]:
        D = dext.det_sigma(as_data(sig, (2, 0), (2, 0)))
        tr, det = D[0][0] + D[1][1], D[0][0] * D[1][1] - D[0][1] * D[1][0]
        assert E.bucket_key(sig, 3, (2, 0))[4] == (1, (-tr).r, det.r)


def test_empty_stream():
    s = E.bucket_solutions([])
    assert s.counts == {} and s.total == 0 and s.non_ore == 0


def test_sigma_line_roundtrip():
    for sig in MINUS[:10]:
        assert E.parse_sigma_line(E.format_sigma(sig)) == sig
    with pytest.raises(ValueError):
        E.parse_sigma_line("1,2,3")
