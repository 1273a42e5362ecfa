from fractions import Fraction as F

import numpy as np
import pytest

from mventropy import MapSequence
from mventropy.errors import ParseError, ResolutionError, UnknownName
from mventropy.ingestion import (builtin, discretize, grid_space, parse_spec,
                                 point_values, realize, selection_on_grid,
                                 serialize_spec)


def values_at(imap, x):
    """Flatten point_values intervals to a set of rational endpoints (all
    builtin values at rational x are points or full intervals)."""
    return {(a, b) for a, b in point_values(imap, x)}


def test_builtin_point_values():
    assert values_at(builtin("tent_f"), F(1, 2)) == {(F(1), F(1))}
    assert values_at(builtin("f01"), F(0)) == {(F(0), F(0)), (F(1), F(1))}
    assert values_at(builtin("f01"), F(1, 3)) == {(F(0), F(0))}
    assert values_at(builtin("phi1"), F(1, 2)) == {(F(0), F(1))}
    assert values_at(builtin("phi0"), F(1, 4)) == {(F(1, 2), F(1, 2))}
    assert values_at(builtin("phi_half"), F(1, 2)) == {(F(0), F(0)), (F(1), F(1))}
    with pytest.raises(UnknownName):
        builtin("nope")


def test_builtin_combinators():
    u = builtin("tent_f | f01")
    assert values_at(u, F(1, 4)) == {(F(1, 2), F(1, 2)), (F(0), F(0))}
    z = builtin("phi_half +0")
    assert (F(0), F(0)) in values_at(z, F(1, 3))


def test_grid_space():
    sp = grid_space(8)
    assert sp.n == 9
    P = sp.pseudometrics[0]
    assert P[0, 8] == 1.0
    assert P[2, 3] == pytest.approx(1 / 8)


def test_discretize_enclosure_soundness():
    # every exact image value at the grid point has a grid point within 1/N
    # inside the discrete image
    for name in ("tent_f", "f01", "phi0", "phi_half +0", "phi1"):
        imap = builtin(name)
        for N in (4, 7, 16):
            mm = discretize(imap, N)
            for g in range(N + 1):
                img = set(mm.images[g])
                for a, b in point_values(imap, F(g, N)):
                    for y in (a, b, (a + b) / 2):
                        assert any(abs(F(h, N) - y) <= F(1, N) for h in img)


def test_discretize_identity_contains_g():
    mm = discretize(builtin("identity"), 8)
    for g in range(9):
        assert g in mm.images[g]


def test_discretize_tent_peak():
    mm = discretize(builtin("tent_f"), 4)
    assert 4 in mm.images[2]   # f(1/2) = 1


def test_discretize_monotone_in_map():
    # phi_0 subset phi_1/2 subset phi_1 survives discretization
    for N in (8, 16, 33):
        for method in ("enclosure", "sample"):
            m0 = discretize(builtin("phi0"), N, method=method)
            mh = discretize(builtin("phi_half"), N, method=method)
            m1 = discretize(builtin("phi1"), N, method=method)
            for g in range(N + 1):
                assert set(m0.images[g]) <= set(mh.images[g])
                assert set(mh.images[g]) <= set(m1.images[g])


def test_discretize_union_zero_modifier():
    mm = discretize(builtin("phi_half +0"), 16)
    for g in range(17):
        assert 0 in mm.images[g]


def test_discretize_sample_keeps_junk_finite():
    # the sample method maps exact point values to single grid points, so the
    # f01 "junk" stays {0, 1} instead of flooding the grid
    mm = discretize(builtin("f01"), 32, method="sample")
    assert set(mm.images[5]) == {0}
    assert set(mm.images[0]) == {0, 32}


def test_selection_on_grid_contained():
    N = 16
    sel = selection_on_grid(builtin("tent_f"), N)
    mm = discretize(builtin("tent_f | f01"), N, method="sample")
    assert sel.single_valued
    for g in range(N + 1):
        assert sel.images[g][0] in mm.images[g]


SPEC_TEXT = """
[space]
points = a b c
metric = 0 0.4 1.0 ; 0.4 0 0.6 ; 1.0 0.6 0
[maps]
m1 = a: a b ; b: c ; c: a
m2 = a: a ; b: b ; c: c
[schedule]
prefix = m2
cycle = m1
[analysis]
kinds = KT_SEP CM_SEP
eps = 0.3 1/2
n_max = 6
mode = exact
"""


def test_parse_and_realize():
    spec = parse_spec(SPEC_TEXT)
    assert spec.points == ("a", "b", "c")
    assert spec.eps == (0.3, 0.5)
    assert spec.kinds == ("KT_SEP", "CM_SEP")
    space, seq, analysis = realize(spec)
    assert space.n == 3
    assert len(seq.prefix) == 1 and len(seq.cycle) == 1
    assert analysis["n_max"] == 6 and analysis["mode"] == "exact"


def test_parse_serialize_roundtrip():
    spec = parse_spec(SPEC_TEXT)
    assert parse_spec(serialize_spec(spec)) == spec


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_spec("points = a b")          # content before any section
    with pytest.raises(ParseError):
        parse_spec("[bogus]\nx = 1")
    with pytest.raises(ParseError):
        parse_spec("[space]\npoints = a\n[maps]\nm = a: a\n[schedule]\n")
    with pytest.raises(ResolutionError):
        realize(parse_spec("[space]\npoints = a\nmetric = 0\n[maps]\n"
                           "m = a: a\n[schedule]\ncycle = ghost\n"))


def test_realize_grid_spec():
    text = ("[space]\ngrid = 16\n[maps]\nphi = builtin phi_half +0\n"
            "[schedule]\ncycle = phi\n[analysis]\nkinds = H_SEP\nn_max = 4\n")
    space, seq, _ = realize(parse_spec(text))
    assert space.n == 17
    for g in range(17):
        assert 0 in seq.cycle[0].images[g]
