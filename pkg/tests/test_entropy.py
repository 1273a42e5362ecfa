import math

import numpy as np
import pytest

from mventropy import (Caps, autonomous, ball_cover, check_prop61, count_branch,
                       count_cm, count_haus, count_kt, count_lcover, count_rho,
                       count_ucover, estimate, profile)
from mventropy.dynamics import Cover, MultiMap, MapSequence
from mventropy.entropy import default_eps_grid, default_window, fit_rate
from mventropy.errors import NotASelection
from mventropy.ingestion import (builtin, discretize, grid_space,
                                 selection_on_grid)

from conftest import discrete_space, seq_of

LOG2 = math.log(2)
EXACT_CAPS = Caps(exact_limit=100_000, branch_budget=100_000)


def test_count_kt_full_shift(two_pt):
    full = seq_of(two_pt, [(0, 1), (0, 1)])
    for n in range(1, 8):
        res = count_kt(full, 0, 0.5, n, mode="exact")
        assert res.cardinality == 2 ** n
        assert res.bound == "EXACT"


def test_count_kt_constant_map(two_pt):
    const = seq_of(two_pt, [(0,), (0,)])
    for n in (1, 2, 5):
        assert count_kt(const, 0, 0.5, n).cardinality == 2


def test_count_cm_values(two_pt):
    full = seq_of(two_pt, [(0, 1), (0, 1)])
    assert (count_cm(full, 0, 0.5, 1).cardinality
            == count_kt(full, 0, 0.5, 1).cardinality)
    for n in (1, 2, 4):
        assert count_cm(full, 0, 0.5, n).cardinality == 2
    sv = seq_of(two_pt, [(1,), (0,)])
    for n in (1, 3):
        assert (count_cm(sv, 0, 0.5, n).cardinality
                == count_kt(sv, 0, 0.5, n).cardinality)


def test_count_rho_full_relation(two_pt):
    full = seq_of(two_pt, [(0, 1), (0, 1)])
    s1 = count_rho(full, 0, 0.5, 1).cardinality
    for n in (2, 3, 4):
        # images always intersect at k >= 1, so nothing new separates
        assert count_rho(full, 0, 0.5, n).cardinality == s1


def test_count_haus_and_branch_example(two_pt):
    seq = seq_of(two_pt, [(0,), (0, 1)])
    assert count_haus(seq, 0, 0.5, 2).cardinality == 2
    assert count_branch(seq, 0, 0.5, 2).cardinality == 2
    assert count_haus(seq, 0, 0.5, 1).cardinality == 2


def test_count_covers(two_pt):
    ident = seq_of(two_pt, [(0,), (1,)])
    whole = Cover(two_pt, (frozenset({0, 1}),))
    singles = Cover(two_pt, (frozenset({0}), frozenset({1})))
    for n in (1, 2, 3):
        assert count_ucover(ident, whole, n).cardinality == 1
        assert count_lcover(ident, whole, n).cardinality == 1
    assert count_ucover(ident, singles, 2).cardinality == 2
    assert count_lcover(ident, singles, 2).cardinality == 2
    assert count_lcover(ident, singles, 1).cardinality == 2


def test_estimate_rates(two_pt):
    const = seq_of(two_pt, [(0,), (0,)])
    est = estimate(const, "KT_SEP", p=0, eps=0.5, n_max=8)
    assert est.fitted_rate == pytest.approx(0.0, abs=1e-12)
    full = seq_of(two_pt, [(0, 1), (0, 1)])
    est = estimate(full, "KT_SEP", p=0, eps=0.5, n_max=10)
    assert est.counts == tuple(2 ** n for n in range(1, 11))
    for n, r in enumerate(est.rates, start=1):
        assert r == pytest.approx(LOG2, abs=1e-9)
    assert est.fitted_rate == pytest.approx(LOG2, abs=1e-9)
    assert est.bound == "EXACT"


def test_estimate_golden_mean(two_pt):
    gold = seq_of(two_pt, [(0, 1), (0,)])
    est = estimate(gold, "KT_SEP", p=0, eps=0.5, n_max=15)
    fib = [2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597]
    assert list(est.counts) == fib
    phi = math.log((1 + math.sqrt(5)) / 2)
    assert est.fitted_rate == pytest.approx(phi, rel=0.02)


def test_fit_rate_window():
    counts = [2 ** n for n in range(1, 9)]
    assert fit_rate(counts, 4) == pytest.approx(LOG2, abs=1e-12)
    assert default_window(10) == 5


def test_profile_headline(two_pt):
    full = seq_of(two_pt, [(0, 1), (0, 1)])
    prof = profile(full, kinds=("KT_SEP", "CM_SEP"), eps_grid=[0.5, 0.25],
                   n_max=6)
    assert prof.headline("KT_SEP") == pytest.approx(LOG2, abs=1e-9)
    assert prof.headline("CM_SEP") == pytest.approx(0.0, abs=1e-9)
    assert prof.headline_bound("KT_SEP") == "EXACT"
    # one estimate per (kind, p, eps)
    assert len(prof.estimates) == 4


def test_default_eps_grid(two_pt):
    grid = default_eps_grid(two_pt, 0, 4)
    assert grid == [0.5, 0.25, 0.125, 0.0625]


def test_b_haus_delegates(two_pt):
    seq = seq_of(two_pt, [(0,), (0, 1)])
    eb = estimate(seq, "B_HAUS", p=0, eps=0.5, n_max=5)
    eh = estimate(seq, "H_SEP", p=0, eps=0.5, n_max=5)
    assert eb.counts == eh.counts


def test_check_prop61_trivial(two_pt):
    sv = seq_of(two_pt, [(1,), (0,)])
    assert check_prop61(sv, sv, p=0, J=3) == frozenset()


def test_check_prop61_nonempty(two_pt):
    # phi(a)={a,b}, phi(b)={b}; selection f(a)=b, f(b)=b: at j=1
    # p^H(phi(a),phi(b)) = 1 but p(f(a),f(b)) = 0, so some point must go
    seq = seq_of(two_pt, [(0, 1), (1,)])
    sel = seq_of(two_pt, [(1,), (1,)])
    A = check_prop61(seq, sel, p=0, J=1)
    assert len(A) >= 1


def test_check_prop61_rejects_noncontained_selection(two_pt):
    seq = seq_of(two_pt, [(0,), (1,)])
    bad = seq_of(two_pt, [(1,), (1,)])
    with pytest.raises(NotASelection):
        check_prop61(seq, bad, p=0, J=1)
    multi = seq_of(two_pt, [(0, 1), (1,)])
    with pytest.raises(NotASelection):
        check_prop61(seq, multi, p=0, J=1)


def test_check_prop61_enclosure_calibration():
    # under enclosure discretization the Prop. 6.1 equality only holds up to
    # O(1/N); atol = 2.5/N recovers the endpoint pair at small N
    N = 16
    sp = grid_space(N)
    seq = autonomous(discretize(builtin("tent_f | f01"), N, sp,
                                method="enclosure"))
    sel = autonomous(selection_on_grid(builtin("tent_f"), N, sp))
    A = check_prop61(seq, sel, p=0, J=1, atol=2.5 / N)
    assert A == frozenset({0, N})


def test_sep_strict_span_weak_boundary(two_pt):
    # eps exactly at the realized distance: separated drops, spanning covers
    full = seq_of(two_pt, [(0, 1), (0, 1)])
    assert count_kt(full, 0, 1.0, 3).cardinality == 1
    assert count_kt(full, 0, 1.0, 3, side="span").cardinality == 1
    assert count_kt(full, 0, 0.999, 3).cardinality == 8
