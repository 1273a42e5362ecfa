import numpy as np
import pytest

import mventropy.laws as laws
from mventropy.laws import LAW_IDS, LawSuite, gen_selection, gen_system, run_suite
from mventropy.ingestion import parse_spec


def test_gen_system_deterministic():
    suite = LawSuite(seed=3)
    s1, q1 = gen_system(5, suite)
    s2, q2 = gen_system(5, suite)
    assert s1.points == s2.points
    assert np.array_equal(s1.pseudometrics[0], s2.pseudometrics[0])
    assert [m.images for m in q1.cycle] == [m.images for m in q2.cycle]


def test_gen_selection_contained():
    suite = LawSuite()
    for seed in range(10):
        _sp, seq = gen_system(seed, suite)
        psi = gen_selection(seed, seq)
        assert psi.single_valued
        for m, s in zip(list(seq.prefix) + list(seq.cycle),
                        list(psi.prefix) + list(psi.cycle)):
            for x in range(m.space.n):
                assert s.images[x][0] in m.images[x]


def test_run_suite_small_clean():
    rep = run_suite(LawSuite(count=8, seed=1))
    assert rep.passed
    assert set(rep.checked) == set(LAW_IDS)
    assert rep.checked["entropy.cm_le_kt"] == 8


def test_violations_serialize_replayable_instances():
    # corrupt one solver path and check the harness catches it and emits a
    # parseable instance dump
    real = laws.count_cm

    def corrupted(seq, p, eps, n, mode="auto", side="sep", caps=None):
        res = real(seq, p, eps, n, mode=mode, side=side, caps=caps)
        class Fake:
            cardinality = res.cardinality + (2 if side == "sep" else 0)
            bound = res.bound
            witness = res.witness
        return Fake()

    old = laws.count_cm
    laws.count_cm = corrupted
    try:
        rep = run_suite(LawSuite(count=4, seed=0))
    finally:
        laws.count_cm = old
    assert not rep.passed
    assert any(v["law"] == "entropy.cm_le_kt" for v in rep.violations)
    for v in rep.violations[:3]:
        spec = parse_spec(v["instance"])      # replays as a fixture
        assert spec.cycle


def test_single_valued_suite():
    rep = run_suite(LawSuite(count=8, seed=2, single_valued=True))
    assert rep.passed
    assert rep.checked["entropy.single_valued"] == 8
