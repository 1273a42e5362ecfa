import numpy as np
import pytest

from mventropy import p_haus_at, p_rho_at, pn, pn_branch, pn_cm
from mventropy.errors import LengthMismatch
from mventropy.laws import LawSuite, gen_system

from conftest import brute_pn_cm, discrete_space, line_space, seq_of


def test_pn_values():
    sp = line_space(3)
    assert pn(sp, 0, (0, 1), (0, 1)) == 0
    assert pn(sp, 0, (1,), (2,)) == 1
    assert pn(sp, 0, (0, 1), (2, 1)) == 2
    with pytest.raises(LengthMismatch):
        pn(sp, 0, (0, 1), (0,))
    with pytest.raises(LengthMismatch):
        pn(sp, 0, (), ())


def test_pn_cm_values(two_pt):
    full = seq_of(two_pt, [(0, 1), (0, 1)])
    assert pn_cm(full, 0, 3, 0, 0) == 0
    assert pn_cm(full, 0, 1, 0, 1) == two_pt.pseudometrics[0][0, 1]
    for n in (1, 2, 4):
        # first coordinates are forced apart, later ones can coincide
        assert pn_cm(full, 0, n, 0, 1) == 1


def test_p_rho_and_haus_at(two_pt):
    # phi(a)={a}, phi(b)={a,b}
    seq = seq_of(two_pt, [(0,), (0, 1)])
    assert p_rho_at(seq, 0, 0, 0, 1) == 1
    assert p_rho_at(seq, 0, 1, 0, 1) == 0    # images intersect
    assert p_haus_at(seq, 0, 1, 0, 1) == 1
    assert p_haus_at(seq, 0, 2, 0, 0) == 0
    sv = seq_of(two_pt, [(1,), (0,)])
    for k in (0, 1, 2, 3):
        # single-valued: Hausdorff collapses to the pointwise distance
        assert p_haus_at(sv, 0, k, 0, 1) == 1


def test_pn_branch_values(two_pt):
    seq = seq_of(two_pt, [(0,), (0, 1)])
    assert pn_branch(seq, 0, 2, 0, 0) == 0
    assert pn_branch(seq, 0, 2, 0, 1) == 1
    sv = seq_of(two_pt, [(1,), (0,)])
    assert pn_branch(sv, 0, 3, 0, 1) == 1    # singleton orbit sets -> pn


def test_pn_cm_dp_matches_brute_force():
    suite = LawSuite(max_points=5)
    for seed in range(20):
        _space, seq = gen_system(seed, suite)
        m = seq.space.n
        for n in (1, 2, 3):
            for x in range(m):
                for y in range(x + 1, m):
                    assert pn_cm(seq, 0, n, x, y) == pytest.approx(
                        brute_pn_cm(seq, 0, n, x, y), abs=1e-12)


def test_proof_inequalities():
    suite = LawSuite(max_points=5)
    for seed in range(15):
        _space, seq = gen_system(seed, suite)
        m = seq.space.n
        for n in (1, 2, 3):
            for x in range(m):
                for y in range(m):
                    rho = max(p_rho_at(seq, 0, k, x, y) for k in range(n))
                    haus = max(p_haus_at(seq, 0, k, x, y) for k in range(n))
                    assert rho <= pn_cm(seq, 0, n, x, y) + 1e-12
                    assert haus <= pn_branch(seq, 0, n, x, y) + 1e-12
